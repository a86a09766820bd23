#include "shaderevo/genetic_ops.hpp"

#include <optional>
#include <string>
#include <vector>

namespace shaderevo {

void GrowthParams::validate() const {
    std::vector<std::string> problems;
    if (min_init_depth < 1) {
        problems.emplace_back("min_init_depth must be >= 1");
    }
    if (max_init_depth < min_init_depth) {
        problems.emplace_back("max_init_depth must be >= min_init_depth");
    }
    if (hard_max_depth < max_init_depth) {
        problems.emplace_back("hard_max_depth must be >= max_init_depth");
    }
    if (!(terminal_probability >= 0.0 && terminal_probability <= 1.0)) {
        problems.emplace_back("terminal_probability must lie in [0, 1]");
    }
    if (!problems.empty()) {
        throw ValidationError("invalid growth parameters", std::move(problems));
    }
}

namespace {

Symbol random_operator(Rng& rng) { return kOperators[rng.index(kOperators.size())]; }

void grow_into(std::vector<Node>& out, int remaining, bool force_operator, double terminal_probability, Rng& rng) {
    const bool terminal = remaining <= 1 || (!force_operator && rng.bernoulli(terminal_probability));
    if (terminal) {
        out.push_back(random_terminal(rng).root());
        return;
    }
    const Symbol op = random_operator(rng);
    out.push_back({op, 0.0});
    for (int k = 0; k < arity(op); ++k) {
        grow_into(out, remaining - 1, false, terminal_probability, rng);
    }
}

void full_into(std::vector<Node>& out, int remaining, Rng& rng) {
    if (remaining <= 1) {
        out.push_back(random_terminal(rng).root());
        return;
    }
    const Symbol op = random_operator(rng);
    out.push_back({op, 0.0});
    for (int k = 0; k < arity(op); ++k) {
        full_into(out, remaining - 1, rng);
    }
}

} // namespace

Expression random_terminal(Rng& rng) {
    const Symbol kind = kTerminals[rng.index(kTerminals.size())];
    if (kind == Symbol::Constant) {
        return Expression::constant(rng.uniform(-1.0, 1.0));
    }
    return Expression::variable(kind);
}

Expression grow_expression(int max_depth, bool operator_root, double terminal_probability, Rng& rng) {
    std::vector<Node> nodes;
    grow_into(nodes, max_depth, operator_root, terminal_probability, rng);
    return Expression(std::move(nodes));
}

Expression full_expression(int depth, Rng& rng) {
    std::vector<Node> nodes;
    full_into(nodes, depth, rng);
    return Expression(std::move(nodes));
}

Expression random_expression(const GrowthParams& params, Rng& rng) {
    const auto span = static_cast<std::size_t>(params.max_init_depth - params.min_init_depth + 1);
    const int depth = params.min_init_depth + static_cast<int>(rng.index(span));
    if (rng.bernoulli(0.5)) {
        return full_expression(depth, rng);
    }
    return grow_expression(depth, true, params.terminal_probability, rng);
}

std::pair<Expression, Expression> crossover(const Expression& a, const Expression& b, int hard_max_depth, Rng& rng) {
    std::optional<Expression> first;
    std::optional<Expression> second;
    for (int attempt = 0; attempt < kOperatorAttempts && !(first && second); ++attempt) {
        const auto i = rng.index(a.size());
        const auto j = rng.index(b.size());
        if (!first) {
            auto child = a.replace_subtree(i, b.subtree(j));
            if (child.depth() <= hard_max_depth) {
                first = std::move(child);
            }
        }
        if (!second) {
            auto child = b.replace_subtree(j, a.subtree(i));
            if (child.depth() <= hard_max_depth) {
                second = std::move(child);
            }
        }
    }
    return {first.value_or(a), second.value_or(b)};
}

Expression mutate(const Expression& expr, const GrowthParams& params, Rng& rng) {
    for (int attempt = 0; attempt < kOperatorAttempts; ++attempt) {
        const auto at = rng.index(expr.size());
        auto child = expr.replace_subtree(at, grow_expression(kMutationGrowDepth, false, params.terminal_probability, rng));
        if (child.depth() <= params.hard_max_depth) {
            return child;
        }
    }
    return expr;
}

} // namespace shaderevo
