#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace shaderevo {

/// Seeded random source shared by every stochastic operation.
///
/// The raw engine output of std::mt19937_64 is fixed by the standard, but the
/// std distributions are not, so all derived draws are implemented here to keep
/// trajectories identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be non-zero.
    std::size_t index(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
        std::uint64_t draw = next();
        while (draw > limit) {
            draw = next();
        }
        return static_cast<std::size_t>(draw % bound);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    std::mt19937_64 engine_;
};

} // namespace shaderevo
