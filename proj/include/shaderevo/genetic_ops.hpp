#pragma once

#include <utility>

#include "shaderevo/expression.hpp"
#include "shaderevo/rng.hpp"

namespace shaderevo {

/// Tree-growth limits. Initial trees use ramped half-and-half over
/// [min_init_depth, max_init_depth]; no operator ever yields a tree deeper
/// than hard_max_depth.
struct GrowthParams {
    int min_init_depth = 2;
    int max_init_depth = 5;
    int hard_max_depth = 8;
    /// Chance of stopping with a terminal at levels where the grow method
    /// is free to choose.
    double terminal_probability = 0.3;

    /// Throws ValidationError listing every broken constraint.
    void validate() const;
};

/// Depth limit of the replacement subtree grown by mutate().
inline constexpr int kMutationGrowDepth = 4;

/// Attempts made by crossover/mutate before falling back to the parent.
inline constexpr int kOperatorAttempts = 4;

Expression random_terminal(Rng& rng);

/// Grow-method tree of depth at most `max_depth`. With `operator_root` the
/// root is always an operator (when max_depth > 1).
Expression grow_expression(int max_depth, bool operator_root, double terminal_probability, Rng& rng);

/// Full-method tree: every branch reaches exactly `depth`.
Expression full_expression(int depth, Rng& rng);

Expression random_expression(const GrowthParams& params, Rng& rng);

/// Subtree crossover. Each offspring that would exceed `hard_max_depth` is
/// retried with fresh crossover points; after the retries are spent the
/// corresponding parent is returned unchanged.
std::pair<Expression, Expression> crossover(const Expression& a, const Expression& b, int hard_max_depth, Rng& rng);

/// Subtree mutation with the same depth guard as crossover().
Expression mutate(const Expression& expr, const GrowthParams& params, Rng& rng);

} // namespace shaderevo
