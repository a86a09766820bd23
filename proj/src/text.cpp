#include <array>
#include <charconv>
#include <cmath>
#include <optional>

#include "shaderevo/expression.hpp"

namespace shaderevo {

namespace {

constexpr int kMaxNesting = 256;

std::string describe(ParseError::Kind kind, std::size_t position, const std::string& message) {
    const char* label = "syntax error";
    if (kind == ParseError::Kind::UnknownSymbol) {
        label = "unknown symbol";
    } else if (kind == ParseError::Kind::Arity) {
        label = "arity error";
    }
    return std::string(label) + " at offset " + std::to_string(position) + ": " + message;
}

} // namespace

ParseError::ParseError(Kind kind, std::size_t position, const std::string& message)
    : ValidationError(describe(kind, position, message)), kind_(kind), position_(position) {}

std::string format_constant(double value) {
    std::array<char, 64> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    std::string text(buf.data(), result.ptr);
    if (!std::isfinite(value) || text.find('.') != std::string::npos) {
        return text;
    }
    const auto exp = text.find_first_of("eE");
    if (exp == std::string::npos) {
        return text + ".0";
    }
    return text.insert(exp, ".0");
}

namespace {

void write(std::string& out, std::span<const Node> nodes, std::size_t& cursor) {
    const Node& n = nodes[cursor++];
    if (n.symbol == Symbol::Constant) {
        out += format_constant(n.value);
        return;
    }
    if (!is_operator(n.symbol)) {
        out += symbol_name(n.symbol);
        return;
    }
    out += '(';
    out += symbol_name(n.symbol);
    for (int k = 0; k < arity(n.symbol); ++k) {
        out += ' ';
        write(out, nodes, cursor);
    }
    out += ')';
}

std::optional<Symbol> lookup(std::string_view name) {
    for (auto s : kOperators) {
        if (symbol_name(s) == name) {
            return s;
        }
    }
    for (auto s : kTerminals) {
        if (s != Symbol::Constant && symbol_name(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expression run() {
        skip_space();
        parse_expr(0);
        skip_space();
        if (pos_ != text_.size()) {
            fail(ParseError::Kind::Syntax, "unexpected trailing input");
        }
        return Expression(std::move(nodes_));
    }

private:
    [[noreturn]] void fail(ParseError::Kind kind, const std::string& message) const {
        throw ParseError(kind, pos_, message);
    }
    [[noreturn]] void fail_at(ParseError::Kind kind, std::size_t at, const std::string& message) const {
        throw ParseError(kind, at, message);
    }

    void skip_space() {
        while (pos_ < text_.size() && is_space(text_[pos_])) {
            ++pos_;
        }
    }

    std::string_view read_token() {
        const auto start = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '(' && text_[pos_] != ')') {
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    void parse_expr(int nesting) {
        if (pos_ >= text_.size()) {
            fail(ParseError::Kind::Syntax, "unexpected end of input");
        }
        if (text_[pos_] == ')') {
            fail(ParseError::Kind::Syntax, "unbalanced ')'");
        }
        if (text_[pos_] == '(') {
            parse_application(nesting);
            return;
        }
        parse_atom();
    }

    void parse_application(int nesting) {
        const auto open = pos_;
        if (nesting >= kMaxNesting) {
            fail(ParseError::Kind::Syntax, "nesting too deep");
        }
        ++pos_;
        skip_space();
        const auto head_at = pos_;
        const auto head = read_token();
        if (head.empty()) {
            fail(ParseError::Kind::Syntax, "expected operator name");
        }
        const auto symbol = lookup(head);
        if (!symbol) {
            fail_at(is_number_start(head.front()) ? ParseError::Kind::Syntax : ParseError::Kind::UnknownSymbol, head_at,
                    "'" + std::string(head) + "' is not an operator");
        }
        if (!is_operator(*symbol)) {
            fail_at(ParseError::Kind::Syntax, head_at, "'" + std::string(head) + "' cannot be applied");
        }
        nodes_.push_back({*symbol, 0.0});
        int children = 0;
        for (;;) {
            skip_space();
            if (pos_ >= text_.size()) {
                fail_at(ParseError::Kind::Syntax, open, "unbalanced '('");
            }
            if (text_[pos_] == ')') {
                break;
            }
            parse_expr(nesting + 1);
            ++children;
        }
        if (children != arity(*symbol)) {
            fail_at(ParseError::Kind::Arity, open,
                    "'" + std::string(head) + "' takes " + std::to_string(arity(*symbol)) + " argument(s), got " +
                        std::to_string(children));
        }
        ++pos_;
    }

    static bool is_number_start(char c) {
        return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
    }

    void parse_atom() {
        const auto at = pos_;
        const auto token = read_token();
        if (is_number_start(token.front())) {
            auto digits = token;
            if (digits.front() == '+') {
                digits.remove_prefix(1);
            }
            double value = 0.0;
            const auto result = std::from_chars(digits.data(), digits.data() + digits.size(), value);
            if (result.ec != std::errc{} || result.ptr != digits.data() + digits.size() || !std::isfinite(value)) {
                fail_at(ParseError::Kind::Syntax, at, "malformed number '" + std::string(token) + "'");
            }
            nodes_.push_back({Symbol::Constant, value});
            return;
        }
        const auto symbol = lookup(token);
        if (!symbol) {
            fail_at(ParseError::Kind::UnknownSymbol, at, "unknown symbol '" + std::string(token) + "'");
        }
        if (is_operator(*symbol)) {
            fail_at(ParseError::Kind::Arity, at, "operator '" + std::string(token) + "' used without arguments");
        }
        nodes_.push_back({*symbol, 0.0});
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<Node> nodes_;
};

} // namespace

std::string serialize(const Expression& expr) {
    std::string out;
    std::size_t cursor = 0;
    write(out, expr.nodes(), cursor);
    return out;
}

Expression parse(std::string_view text) { return Parser(text).run(); }

} // namespace shaderevo
