#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "shaderevo/expression.hpp"
#include "shaderevo/genetic_ops.hpp"
#include "shaderevo/rng.hpp"

namespace shaderevo {

struct EvolutionConfig {
    int population_size = 100;
    int display_count = 9;
    double crossover_prob = 0.9;
    double mutation_prob = 0.1;
    int tournament_size = 3;
    GrowthParams growth{};
    int grid_points_per_axis = 10;
    double grid_lo = -10.0;
    double grid_hi = 10.0;
    double per_point_cap = 1e6;

    /// Throws ValidationError listing every broken constraint.
    void validate() const;
};

struct Individual {
    Expression genome;
    std::optional<double> distance; // lower is fitter
};

struct Population {
    std::vector<Individual> members;
    int generation = 0;
};

/// Evenly spaced sample points shared by x, y, z and time, with both
/// endpoints included. Points are ordered with x outermost and time innermost.
struct SampleGrid {
    std::vector<double> axis_values;
    std::vector<Env> points;
    double per_point_cap = 1e6;
};

SampleGrid build_sample_grid(const EvolutionConfig& config);

/// Values of `expr` at every grid point, in grid order.
std::vector<double> evaluate_on_grid(const Expression& expr, const SampleGrid& grid);

/// Capped least-squares distance between two evaluated value vectors.
/// Each point contributes min(cap, diff^2); a non-finite square counts as the
/// cap unless both values are identical (same infinity, or both NaN).
double grid_distance(std::span<const double> a, std::span<const double> b, double cap);

double expression_distance(const Expression& a, const Expression& b, const SampleGrid& grid);

Population init_population(const EvolutionConfig& config, Rng& rng);

struct DisplayEntry {
    std::size_t member_index = 0;
    Individual individual;
};

/// The display_count members shown to the user. Ranked by distance when any
/// member has one, otherwise by index; structurally distinct genomes are
/// preferred and duplicates only pad the tail.
std::vector<DisplayEntry> display_subset(const Population& population, const EvolutionConfig& config);

/// Sets every member's distance to its nearest selection.
Population assign_fitness(const Population& population, std::span<const Expression> selections, const SampleGrid& grid);

/// Index of the tournament winner (lowest distance, ties to the lower index).
std::size_t tournament_select(const Population& population, int tournament_size, Rng& rng);

/// Elites first (the selections, verbatim), then tournament offspring.
Population next_generation(const Population& population, std::span<const Expression> selections,
                           const EvolutionConfig& config, Rng& rng);

struct Injection {
    Population population;
    std::size_t replaced_index = 0;
};

/// Replaces the worst member, or a uniformly random one when no distances exist.
Injection inject(const Population& population, const Expression& expr, Rng& rng);

} // namespace shaderevo
