#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shaderevo/evolution.hpp"

namespace shaderevo {

struct TraceRow {
    int generation = 0;
    double chosen_best_distance = 0.0;
    double population_min_distance = 0.0;
    std::string chosen_expression;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

using ConvergenceTrace = std::vector<TraceRow>;

/// Display index of the candidate closest to `target`; ties go to the lower
/// index. `candidates` must not be empty.
std::size_t simulated_user_pick(std::span<const Expression> candidates, const Expression& target, const SampleGrid& grid);

/// Everything the simulated user saw and did in one generation.
struct GenerationSnapshot {
    const Population& population;
    const std::vector<DisplayEntry>& displayed;
    const std::vector<Expression>& selections;
    const Population& next;
};

using GenerationObserver = std::function<void(const GenerationSnapshot&)>;

struct SimulationOptions {
    EvolutionConfig config{};
    /// Candidates picked per generation, nearest to the target first.
    int pick_top_k = 1;
    GenerationObserver observer{};
};

/// Drives the full loop with a target-matching oracle standing in for the
/// user. Throws ParseError for a bad target and ValidationError for bad options.
ConvergenceTrace run_simulation(std::string_view target_text, int generations, std::uint64_t seed,
                                const SimulationOptions& options = {});

/// CSV with header generation,chosen_best_distance,population_min_distance,chosen_expression.
void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);

} // namespace shaderevo
