#pragma once

#include <cmath>
#include <cstdint>

namespace latfrac {

// splitmix64; portable and stable across platforms, unlike the standard
// library distributions.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    // Independent stream derived from (seed, stream index).
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ull * (stream + 1));
        Rng r(s);
        r.next_u64();
        r.next_u64();
        return r;
    }

    std::uint64_t next_u64() { return splitmix64(state); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [-1, 1].
    double uniform_pm1() { return 2.0 * uniform() - 1.0; }

    // Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    // Symmetrized Pareto with tail index `index`: |X| = U^{-1/index} >= 1.
    double pareto_sym(double index) {
        double u = uniform();
        while (u == 0.0) u = uniform();
        const double mag = 1.0 / std::pow(u, 1.0 / index);
        return (next_u64() & 1ull) ? mag : -mag;
    }
};

}  // namespace latfrac
