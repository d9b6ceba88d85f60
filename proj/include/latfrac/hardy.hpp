#pragma once

#include <cstdint>
#include <vector>

#include "latfrac/sequence.hpp"

namespace latfrac {

// Geometric grid of dilation parameters t for the maximal function
// sup_t |(Phi_t^d * b)|. Doubling per_octave refines the grid in place
// (the coarse points are a subset of the fine ones), so the grid supremum
// is monotone under refinement and always a lower bound of the true one.
struct DilationGrid {
    double t_min = 1.0 / 16.0;
    double t_max = 1024.0;
    int per_octave = 16;

    std::vector<double> points() const;
};

// Restriction of the dilated Gaussian profile Phi(x) = e^{-pi |x|^2} to Z^n:
// t^{-n} e^{-pi |j|^2 / t^2} for j != 0, and exactly 0 at j = 0.
double dilated_kernel(int n, double t, const LatticeIndex& j);

// max over the grid of |sum_i Phi_t^d(j - i) b(i)| at each output point.
// Kernel terms below 1e-18 of the largest Gaussian factor over the support
// are dropped (negligible against retained terms).
LatticeSequence hardy_maximal(const LatticeSequence& b, const DilationGrid& grid,
                              const CubeWindow& out);
double hardy_maximal_at(const LatticeSequence& b, const DilationGrid& grid,
                        const LatticeIndex& j);

namespace ref {
// Serial baseline for the benchmark; identical values.
LatticeSequence hardy_maximal(const LatticeSequence& b, const DilationGrid& grid,
                              const CubeWindow& out);
}  // namespace ref

struct HpEstimate {
    double value = 0.0;       // |b|_p + truncated l^p norm of the maximal sequence
    bool divergent = false;   // gamma * p <= n: the tail cannot converge
    double gamma = 0.0;       // fitted boundary decay exponent of the maximal sequence
    double lp_part = 0.0;
    double maximal_part = 0.0;
    std::int64_t window_radius = 0;
};

// Hardy quasi-norm estimator. window_radius = 0 applies the default policy.
// When flagged divergent the value is a lower bound only.
HpEstimate hp_quasinorm(const LatticeSequence& b, double p, const DilationGrid& grid,
                        std::int64_t window_radius = 0);

}  // namespace latfrac
