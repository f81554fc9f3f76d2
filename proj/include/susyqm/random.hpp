#pragma once

// Seeded random streams. The engine is std::mt19937_64, whose output sequence
// is fixed by the C++ standard; the real-valued variates are derived here
// rather than through <random> distributions, whose algorithms are
// implementation-defined, so a seed yields identical numbers on every platform.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace susyqm {

struct RngSeed {
    std::uint64_t value = 0;

    /// Per-task sub-seed: seed XOR (index * odd 64-bit constant).
    constexpr RngSeed derive(std::uint64_t index) const noexcept {
        return RngSeed{value ^ (index * 0x9E3779B97F4A7C15ULL)};
    }

    friend constexpr bool operator==(RngSeed, RngSeed) = default;
};

class Rng {
public:
    explicit Rng(RngSeed seed) : engine_(seed.value) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via the Box-Muller transform; both variates are used.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do u1 = uniform01();
        while (u1 == 0.0);
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace susyqm
