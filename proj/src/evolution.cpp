#include "shaderevo/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace shaderevo {

void EvolutionConfig::validate() const {
    std::vector<std::string> problems;
    if (population_size < 1) {
        problems.emplace_back("population_size must be >= 1");
    }
    if (display_count < 1) {
        problems.emplace_back("display_count must be >= 1");
    }
    if (display_count > population_size) {
        problems.emplace_back("display_count must not exceed population_size");
    }
    if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
        problems.emplace_back("crossover_prob must lie in [0, 1]");
    }
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) {
        problems.emplace_back("mutation_prob must lie in [0, 1]");
    }
    if (tournament_size < 1) {
        problems.emplace_back("tournament_size must be >= 1");
    }
    if (grid_points_per_axis < 2) {
        problems.emplace_back("grid_points_per_axis must be >= 2");
    } else if (grid_points_per_axis > 100) {
        problems.emplace_back("grid_points_per_axis must be <= 100");
    }
    if (!(std::isfinite(grid_lo) && std::isfinite(grid_hi) && grid_lo < grid_hi)) {
        problems.emplace_back("grid_interval must be finite with lo < hi");
    }
    if (!(per_point_cap > 0.0 && std::isfinite(per_point_cap))) {
        problems.emplace_back("per_point_cap must be positive and finite");
    }
    try {
        growth.validate();
    } catch (const ValidationError& e) {
        problems.insert(problems.end(), e.violations().begin(), e.violations().end());
    }
    if (!problems.empty()) {
        throw ValidationError("invalid evolution config", std::move(problems));
    }
}

SampleGrid build_sample_grid(const EvolutionConfig& config) {
    const int n = config.grid_points_per_axis;
    if (n < 2) {
        throw ValidationError("invalid evolution config", {"grid_points_per_axis must be >= 2"});
    }
    if (!(config.grid_lo < config.grid_hi)) {
        throw ValidationError("invalid evolution config", {"grid_interval must have lo < hi"});
    }
    SampleGrid grid;
    grid.per_point_cap = config.per_point_cap;
    const double width = config.grid_hi - config.grid_lo;
    grid.axis_values.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        grid.axis_values.push_back(config.grid_lo + (static_cast<double>(i) * width) / static_cast<double>(n - 1));
    }
    const auto& axis = grid.axis_values;
    grid.points.reserve(axis.size() * axis.size() * axis.size() * axis.size());
    for (double x : axis) {
        for (double y : axis) {
            for (double z : axis) {
                for (double t : axis) {
                    grid.points.push_back({x, y, z, t});
                }
            }
        }
    }
    return grid;
}

std::vector<double> evaluate_on_grid(const Expression& expr, const SampleGrid& grid) {
    return evaluate_batch(expr, grid.points);
}

double grid_distance(std::span<const double> a, std::span<const double> b, double cap) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("grid_distance: value vectors differ in length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double lhs = a[i];
        const double rhs = b[i];
        if (lhs == rhs || (std::isnan(lhs) && std::isnan(rhs))) {
            continue;
        }
        const double diff = lhs - rhs;
        const double sq = diff * diff;
        sum += std::isfinite(sq) ? std::min(cap, sq) : cap;
    }
    return sum;
}

double expression_distance(const Expression& a, const Expression& b, const SampleGrid& grid) {
    if (a == b) {
        return 0.0;
    }
    const auto va = evaluate_on_grid(a, grid);
    const auto vb = evaluate_on_grid(b, grid);
    return grid_distance(va, vb, grid.per_point_cap);
}

Population init_population(const EvolutionConfig& config, Rng& rng) {
    Population population;
    population.members.reserve(static_cast<std::size_t>(config.population_size));
    for (int i = 0; i < config.population_size; ++i) {
        population.members.push_back({random_expression(config.growth, rng), std::nullopt});
    }
    return population;
}

std::vector<DisplayEntry> display_subset(const Population& population, const EvolutionConfig& config) {
    const auto& members = population.members;
    const auto wanted = static_cast<std::size_t>(config.display_count);
    if (members.size() < wanted) {
        throw std::invalid_argument("display_subset: population smaller than display_count");
    }

    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const bool ranked = std::any_of(members.begin(), members.end(), [](const Individual& m) { return m.distance.has_value(); });
    if (ranked) {
        constexpr double kUnranked = std::numeric_limits<double>::infinity();
        std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
            return members[l].distance.value_or(kUnranked) < members[r].distance.value_or(kUnranked);
        });
    }

    std::vector<DisplayEntry> shown;
    shown.reserve(wanted);
    std::vector<bool> taken(members.size(), false);
    std::unordered_set<std::string> forms;
    for (auto i : order) {
        if (shown.size() == wanted) {
            break;
        }
        if (forms.insert(serialize(members[i].genome)).second) {
            shown.push_back({i, members[i]});
            taken[i] = true;
        }
    }
    for (auto i : order) {
        if (shown.size() == wanted) {
            break;
        }
        if (!taken[i]) {
            shown.push_back({i, members[i]});
        }
    }
    return shown;
}

Population assign_fitness(const Population& population, std::span<const Expression> selections, const SampleGrid& grid) {
    if (selections.empty()) {
        throw ValidationError("at least one selection is required");
    }
    std::vector<std::vector<double>> selected_values;
    selected_values.reserve(selections.size());
    for (const auto& s : selections) {
        selected_values.push_back(evaluate_on_grid(s, grid));
    }

    Population out = population;
    for (auto& member : out.members) {
        const auto values = evaluate_on_grid(member.genome, grid);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < selections.size(); ++k) {
            const double d = member.genome == selections[k] ? 0.0 : grid_distance(values, selected_values[k], grid.per_point_cap);
            best = std::min(best, d);
        }
        member.distance = best;
    }
    return out;
}

std::size_t tournament_select(const Population& population, int tournament_size, Rng& rng) {
    const auto& members = population.members;
    std::size_t winner = rng.index(members.size());
    for (int k = 1; k < tournament_size; ++k) {
        const auto challenger = rng.index(members.size());
        const double cd = *members[challenger].distance;
        const double wd = *members[winner].distance;
        if (cd < wd || (cd == wd && challenger < winner)) {
            winner = challenger;
        }
    }
    return winner;
}

Population next_generation(const Population& population, std::span<const Expression> selections,
                           const EvolutionConfig& config, Rng& rng) {
    for (const auto& m : population.members) {
        if (!m.distance) {
            throw std::invalid_argument("next_generation: every member needs a distance");
        }
    }
    const auto size = static_cast<std::size_t>(config.population_size);

    Population next;
    next.generation = population.generation + 1;
    next.members.reserve(size);
    for (const auto& s : selections) {
        if (next.members.size() == size) {
            break;
        }
        next.members.push_back({s, std::nullopt});
    }

    while (next.members.size() < size) {
        const auto& mother = population.members[tournament_select(population, config.tournament_size, rng)].genome;
        const auto& father = population.members[tournament_select(population, config.tournament_size, rng)].genome;
        auto offspring = rng.bernoulli(config.crossover_prob)
                             ? crossover(mother, father, config.growth.hard_max_depth, rng)
                             : std::pair<Expression, Expression>{mother, father};
        for (auto* child : {&offspring.first, &offspring.second}) {
            if (next.members.size() == size) {
                break;
            }
            if (rng.bernoulli(config.mutation_prob)) {
                *child = mutate(*child, config.growth, rng);
            }
            next.members.push_back({std::move(*child), std::nullopt});
        }
    }
    return next;
}

Injection inject(const Population& population, const Expression& expr, Rng& rng) {
    const auto& members = population.members;
    if (members.empty()) {
        throw std::invalid_argument("inject: empty population");
    }
    const bool ranked = std::any_of(members.begin(), members.end(), [](const Individual& m) { return m.distance.has_value(); });

    std::size_t worst = 0;
    if (ranked) {
        constexpr double kUnranked = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < members.size(); ++i) {
            if (members[i].distance.value_or(kUnranked) > members[worst].distance.value_or(kUnranked)) {
                worst = i;
            }
        }
    } else {
        worst = rng.index(members.size());
    }

    Injection result{population, worst};
    result.population.members[worst] = {expr, std::nullopt};
    return result;
}

} // namespace shaderevo
