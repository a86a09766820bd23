// Headless interactive-evolution run with a target-matching oracle in place
// of the user. Writes one CSV row per generation.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "shaderevo/simulation.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Simulate the interactive evolution loop against a target expression"};

    std::string target;
    int generations = 0;
    std::uint64_t seed = 0;
    int pop_size = 100;
    int display = 9;
    int pick_top_k = 1;
    std::string out_path;

    app.add_option("--target", target, "Target expression in canonical prefix form")->required();
    app.add_option("--generations", generations, "Number of generations")->required();
    app.add_option("--seed", seed, "Random seed")->required();
    app.add_option("--pop-size", pop_size, "Population size")->capture_default_str();
    app.add_option("--display", display, "Candidates shown per generation")->capture_default_str();
    app.add_option("--pick-top-k", pick_top_k, "Candidates the simulated user selects")->capture_default_str();
    app.add_option("--out", out_path, "CSV trace path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    shaderevo::SimulationOptions options;
    options.config.population_size = pop_size;
    options.config.display_count = display;
    options.pick_top_k = pick_top_k;

    shaderevo::ConvergenceTrace trace;
    try {
        trace = shaderevo::run_simulation(target, generations, seed, options);
    } catch (const shaderevo::ValidationError& e) {
        std::cerr << "evosim: " << e.what() << '\n';
        for (const auto& v : e.violations()) {
            std::cerr << "  " << v << '\n';
        }
        return 2;
    }

    if (out_path.empty()) {
        shaderevo::write_trace_csv(std::cout, trace);
        return 0;
    }
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "evosim: cannot write " << out_path << '\n';
        return 1;
    }
    shaderevo::write_trace_csv(out, trace);
    return out ? 0 : 1;
}
