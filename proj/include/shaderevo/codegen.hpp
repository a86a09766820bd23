#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "shaderevo/expression.hpp"

namespace shaderevo {

struct ShaderArtifact {
    std::string glsl_source;
    std::string expression_text;
    std::string artifact_id;
};

/// Vertex-shader template; the expression replaces kExpressionPlaceholder.
inline constexpr std::string_view kVertexShaderTemplate =
    "uniform float time;\n"
    "void main() {\n"
    "    vec3 p = position;\n"
    "    p.xyz += <EXPR>;\n"
    "    gl_Position = projectionMatrix * modelViewMatrix * vec4(p, 1.0);\n"
    "}\n";

inline constexpr std::string_view kExpressionPlaceholder = "<EXPR>";

/// Scalar shader expression, e.g. "position.x / (position.x + position.z)".
std::string emit_expression(const Expression& expr);

ShaderArtifact emit_vertex_shader(const Expression& expr);

struct LintViolation {
    std::size_t offset = 0;
    std::string message;
};

struct LintResult {
    std::vector<LintViolation> violations;

    bool ok() const noexcept { return violations.empty(); }
};

/// Checks balanced parentheses, whitelisted identifiers and that every
/// numeric literal has a decimal point. Never throws on malformed input.
LintResult lint_shader(std::string_view source);

} // namespace shaderevo
