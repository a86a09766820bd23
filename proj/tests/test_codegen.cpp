#include <doctest.h>

#include <bit>

#include "oracles/infix_evaluator.hpp"
#include "shaderevo/codegen.hpp"
#include "shaderevo/genetic_ops.hpp"

using namespace shaderevo;

TEST_CASE("emit_expression") {
    CHECK(emit_expression(parse("(div x (add x z))")) == "position.x / (position.x + position.z)");
    CHECK(emit_expression(parse("(sin (add y time))")) == "sin(position.y + time)");
    CHECK(emit_expression(parse("1.0")) == "1.0");
    CHECK(emit_expression(parse("-0.5")) == "(-0.5)");
    CHECK(emit_expression(parse("(neg (sub x -0.25))")) == "-(position.x - (-0.25))");
    CHECK(emit_expression(parse("(mul (sin x) (neg y))")) == "sin(position.x) * -(position.y)");
    CHECK(emit_expression(parse("(sub (sub x y) (sub z time))")) ==
          "(position.x - position.y) - (position.z - time)");
    CHECK(emit_expression(parse("(sqrt (log (ceil (floor (cos z)))))")) == "sqrt(log(ceil(floor(cos(position.z)))))");
}

TEST_CASE("emit_vertex_shader fills the template") {
    const auto artifact = emit_vertex_shader(parse("(div x (add x z))"));
    CHECK(artifact.glsl_source ==
          "uniform float time;\n"
          "void main() {\n"
          "    vec3 p = position;\n"
          "    p.xyz += position.x / (position.x + position.z);\n"
          "    gl_Position = projectionMatrix * modelViewMatrix * vec4(p, 1.0);\n"
          "}\n");
    CHECK(artifact.expression_text == "(div x (add x z))");
    CHECK(artifact.artifact_id.size() == 16);
    CHECK(artifact.artifact_id == emit_vertex_shader(parse("(div x (add x z))")).artifact_id);
    CHECK(artifact.artifact_id != emit_vertex_shader(parse("(sin y)")).artifact_id);

    CHECK(emit_vertex_shader(parse("(sin y)")).glsl_source.find("    p.xyz += sin(position.y);\n") != std::string::npos);
    CHECK(emit_vertex_shader(parse("0.0")).glsl_source.find("    p.xyz += 0.0;\n") != std::string::npos);
}

TEST_CASE("lint_shader") {
    CHECK(lint_shader(emit_vertex_shader(parse("(div x (add x z))")).glsl_source).ok());

    SUBCASE("identifiers outside the whitelist") {
        const std::string src = "void main() { gl_Position = texture2D(p); }";
        const auto r = lint_shader(src);
        REQUIRE(r.violations.size() == 1);
        CHECK(r.violations[0].offset == src.find("texture2D"));
    }
    SUBCASE("integer literals") {
        const std::string src = "p.xyz += 10;";
        const auto r = lint_shader(src);
        REQUIRE(r.violations.size() == 1);
        CHECK(r.violations[0].offset == src.find("10"));
        CHECK(lint_shader("p.xyz += 10.0;").ok());
        CHECK(lint_shader("p.xyz += 1.0e-07;").ok());
        CHECK(lint_shader("p.xyz += .5;").ok());
        CHECK_FALSE(lint_shader("p.xyz += 1e5;").ok());
    }
    SUBCASE("parentheses") {
        const auto open = lint_shader("sin((time)");
        REQUIRE(open.violations.size() == 1);
        CHECK(open.violations[0].offset == 3);
        const auto close = lint_shader("sin(time))");
        REQUIRE(close.violations.size() == 1);
        CHECK(close.violations[0].offset == 9);
    }
    SUBCASE("selectors only after a dot") {
        CHECK(lint_shader("position.x + position.y + p.xyz").ok());
        CHECK_FALSE(lint_shader("x + 1.0").ok());
        CHECK_FALSE(lint_shader("position.w").ok());
    }
    SUBCASE("several violations are all reported in order") {
        const auto r = lint_shader("foo(1) + bar)");
        REQUIRE(r.violations.size() == 4);
        CHECK(r.violations[0].offset == 0);
        CHECK(r.violations[1].offset == 4);
        CHECK(r.violations[2].offset == 9);
        CHECK(r.violations[3].offset == 12);
    }
    CHECK(lint_shader("").ok());
}

TEST_CASE("every emitted shader lints clean") {
    Rng rng(10);
    for (int i = 0; i < 10000; ++i) {
        const auto e = random_expression({1, 6, 8, 0.3}, rng);
        const auto r = lint_shader(emit_vertex_shader(e).glsl_source);
        REQUIRE_MESSAGE(r.ok(), serialize(e));
    }
}

TEST_CASE("emitted text evaluates exactly like the tree") {
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const auto e = random_expression({}, rng);
        const oracle::InfixExpression host(emit_expression(e));
        for (int k = 0; k < 100; ++k) {
            const Env env{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(0, 30)};
            REQUIRE_MESSAGE(std::bit_cast<std::uint64_t>(host(env)) == std::bit_cast<std::uint64_t>(evaluate(e, env)),
                            serialize(e));
        }
    }
}
