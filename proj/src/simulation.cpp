#include "shaderevo/simulation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>

namespace shaderevo {

std::size_t simulated_user_pick(std::span<const Expression> candidates, const Expression& target, const SampleGrid& grid) {
    if (candidates.empty()) {
        throw std::invalid_argument("simulated_user_pick: no candidates");
    }
    const auto target_values = evaluate_on_grid(target, grid);
    std::size_t best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double d = grid_distance(evaluate_on_grid(candidates[i], grid), target_values, grid.per_point_cap);
        if (d < best_distance) {
            best = i;
            best_distance = d;
        }
    }
    return best;
}

ConvergenceTrace run_simulation(std::string_view target_text, int generations, std::uint64_t seed,
                                const SimulationOptions& options) {
    const auto target = parse(target_text);
    const auto& config = options.config;
    config.validate();
    if (generations < 1) {
        throw ValidationError("generations must be >= 1");
    }
    if (options.pick_top_k < 1 || options.pick_top_k > config.display_count) {
        throw ValidationError("pick_top_k must lie in [1, display_count]");
    }

    const auto grid = build_sample_grid(config);
    const auto target_values = evaluate_on_grid(target, grid);
    Rng rng(seed);
    auto population = init_population(config, rng);

    ConvergenceTrace trace;
    trace.reserve(static_cast<std::size_t>(generations));
    for (int g = 0; g < generations; ++g) {
        std::vector<double> to_target(population.members.size());
        for (std::size_t i = 0; i < population.members.size(); ++i) {
            to_target[i] = grid_distance(evaluate_on_grid(population.members[i].genome, grid), target_values, grid.per_point_cap);
        }

        const auto displayed = display_subset(population, config);
        std::vector<std::size_t> ranking(displayed.size());
        std::iota(ranking.begin(), ranking.end(), std::size_t{0});
        std::stable_sort(ranking.begin(), ranking.end(), [&](std::size_t l, std::size_t r) {
            return to_target[displayed[l].member_index] < to_target[displayed[r].member_index];
        });

        std::vector<Expression> selections;
        for (int k = 0; k < options.pick_top_k; ++k) {
            selections.push_back(displayed[ranking[static_cast<std::size_t>(k)]].individual.genome);
        }
        const auto& chosen = displayed[ranking.front()];

        TraceRow row;
        row.generation = population.generation;
        row.chosen_best_distance = to_target[chosen.member_index];
        row.population_min_distance = *std::min_element(to_target.begin(), to_target.end());
        row.chosen_expression = serialize(chosen.individual.genome);
        trace.push_back(std::move(row));

        const auto rated = assign_fitness(population, selections, grid);
        auto next = next_generation(rated, selections, config, rng);
        if (options.observer) {
            options.observer(GenerationSnapshot{population, displayed, selections, next});
        }
        population = std::move(next);
    }
    return trace;
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
    out << "generation,chosen_best_distance,population_min_distance,chosen_expression\n";
    for (const auto& row : trace) {
        out << row.generation << ',' << format_constant(row.chosen_best_distance) << ','
            << format_constant(row.population_min_distance) << ',' << row.chosen_expression << '\n';
    }
}

} // namespace shaderevo
