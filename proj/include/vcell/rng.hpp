#pragma once
// Deterministic random streams.
//
// All distribution transforms are implemented here instead of relying on
// <random> distributions, whose output is implementation-defined. Given the
// same seed, a stream therefore produces the same values on any conforming
// standard library, and every consumer of randomness in this project can be
// reproduced from a single 64-bit seed.
//
// Stream derivation: split_seed(seed, n) is the SplitMix64 output at position
// n of the sequence started at `seed`. Trial t of an experiment uses
// split_seed(master_seed, t) as its trial seed, and sub-streams (deployment,
// channels, per-clustering randomness) are derived from the trial seed with
// fixed position constants. This makes every trial independent of execution
// order and thread schedule.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace vcell {

inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t n) {
    std::uint64_t z = seed + (n + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform on [0, 1) with 53-bit resolution
    double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // standard normal, Box-Muller (one value per two uniforms, no cached state)
    double normal() {
        const double u1 = 1.0 - uniform01(); // (0, 1], keeps log finite
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    // exponential with unit mean
    double exponential() { return -std::log1p(-uniform01()); }

    // integer in [0, n), n >= 1
    std::size_t index(std::size_t n) {
        const auto i = static_cast<std::size_t>(uniform01() * double(n));
        return i < n ? i : n - 1;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace vcell
