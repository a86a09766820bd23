#include "shaderevo/codegen.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>

namespace shaderevo {

namespace {

std::string_view infix_token(Symbol op) {
    switch (op) {
    case Symbol::Add: return " + ";
    case Symbol::Sub: return " - ";
    case Symbol::Mul: return " * ";
    default: return " / ";
    }
}

std::string_view terminal_text(Symbol s) {
    switch (s) {
    case Symbol::X: return "position.x";
    case Symbol::Y: return "position.y";
    case Symbol::Z: return "position.z";
    default: return "time";
    }
}

void emit_node(std::string& out, std::span<const Node> nodes, std::size_t& cursor) {
    const Node& n = nodes[cursor++];
    if (n.symbol == Symbol::Constant) {
        const auto literal = format_constant(n.value);
        if (literal.front() == '-') {
            out += '(';
            out += literal;
            out += ')';
        } else {
            out += literal;
        }
        return;
    }
    if (!is_operator(n.symbol)) {
        out += terminal_text(n.symbol);
        return;
    }
    if (n.symbol == Symbol::Neg) {
        out += "-(";
        emit_node(out, nodes, cursor);
        out += ')';
        return;
    }
    if (arity(n.symbol) == 1) {
        out += symbol_name(n.symbol);
        out += '(';
        emit_node(out, nodes, cursor);
        out += ')';
        return;
    }
    for (int side = 0; side < 2; ++side) {
        if (side == 1) {
            out += infix_token(n.symbol);
        }
        const bool wrap = is_binary(nodes[cursor].symbol);
        if (wrap) {
            out += '(';
        }
        emit_node(out, nodes, cursor);
        if (wrap) {
            out += ')';
        }
    }
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf.data());
}

constexpr std::array<std::string_view, 19> kIdentifiers = {
    "position", "time",  "p",     "gl_Position", "projectionMatrix", "modelViewMatrix", "vec4",
    "vec3",     "uniform", "float", "void",      "main",             "xyz",             "ceil",
    "floor",    "sqrt",  "log",   "sin",         "cos",
};

// Selectors allowed after '.', as in position.x or p.xyz.
constexpr std::array<std::string_view, 4> kSwizzles = {"x", "y", "z", "xyz"};

bool whitelisted(std::string_view id) {
    return std::find(kIdentifiers.begin(), kIdentifiers.end(), id) != kIdentifiers.end();
}

bool is_swizzle(std::string_view id) { return std::find(kSwizzles.begin(), kSwizzles.end(), id) != kSwizzles.end(); }

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }
bool ident_char(char c) { return ident_start(c) || digit(c); }

} // namespace

std::string emit_expression(const Expression& expr) {
    std::string out;
    std::size_t cursor = 0;
    emit_node(out, expr.nodes(), cursor);
    return out;
}

ShaderArtifact emit_vertex_shader(const Expression& expr) {
    ShaderArtifact artifact;
    artifact.expression_text = serialize(expr);
    artifact.glsl_source = std::string(kVertexShaderTemplate);
    const auto at = artifact.glsl_source.find(kExpressionPlaceholder);
    artifact.glsl_source.replace(at, kExpressionPlaceholder.size(), emit_expression(expr));
    artifact.artifact_id = fnv1a_hex(artifact.expression_text);
    return artifact;
}

LintResult lint_shader(std::string_view source) {
    LintResult result;
    std::vector<std::size_t> open;
    bool after_dot = false;
    std::size_t i = 0;
    while (i < source.size()) {
        const char c = source[i];
        if (ident_start(c)) {
            const auto start = i;
            while (i < source.size() && ident_char(source[i])) {
                ++i;
            }
            const auto id = source.substr(start, i - start);
            if (after_dot ? !is_swizzle(id) : !whitelisted(id)) {
                result.violations.push_back({start, "identifier '" + std::string(id) + "' is not allowed"});
            }
            after_dot = false;
            continue;
        }
        if (digit(c) || (c == '.' && i + 1 < source.size() && digit(source[i + 1]))) {
            const auto start = i;
            bool has_point = false;
            while (i < source.size() && (digit(source[i]) || source[i] == '.')) {
                has_point = has_point || source[i] == '.';
                ++i;
            }
            if (i < source.size() && (source[i] == 'e' || source[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < source.size() && (source[j] == '+' || source[j] == '-')) {
                    ++j;
                }
                if (j < source.size() && digit(source[j])) {
                    while (j < source.size() && digit(source[j])) {
                        ++j;
                    }
                    i = j;
                }
            }
            if (!has_point) {
                result.violations.push_back(
                    {start, "numeric literal '" + std::string(source.substr(start, i - start)) + "' lacks a decimal point"});
            }
            after_dot = false;
            continue;
        }
        if (c == '(') {
            open.push_back(i);
        } else if (c == ')') {
            if (open.empty()) {
                result.violations.push_back({i, "unmatched ')'"});
            } else {
                open.pop_back();
            }
        }
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r') {
            after_dot = c == '.';
        }
        ++i;
    }
    for (auto at : open) {
        result.violations.push_back({at, "unmatched '('"});
    }
    std::sort(result.violations.begin(), result.violations.end(),
              [](const LintViolation& a, const LintViolation& b) { return a.offset < b.offset; });
    return result;
}

} // namespace shaderevo
