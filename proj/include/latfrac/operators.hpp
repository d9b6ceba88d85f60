#pragma once

#include <cstdint>
#include <span>

#include "latfrac/fracspec.hpp"
#include "latfrac/sequence.hpp"

namespace latfrac {

struct OperatorMetadata {
    std::uint64_t spec_hash = 0;
    CubeWindow window;
    double wall_ms = 0.0;
    bool has_tail = false;  // tail_bound/q populated by truncated_lq_norm
    double tail_bound = 0.0;
    double q = 0.0;
};

struct OperatorResult {
    LatticeSequence values;  // dense on the requested output window
    OperatorMetadata meta;
};

// (T b)(j) = sum over i in supp(b), i != A_k j for every k, of
// b(i) / prod_k |i - A_k j|^{alpha_k}. Exact finite sums, fixed per-point
// summation order; parallel across output points only.
OperatorResult apply_T(const FractionalSpec& spec, const LatticeSequence& b, const CubeWindow& out);
double apply_T_at(const FractionalSpec& spec, const LatticeSequence& b, const LatticeIndex& j);

// (I_alpha b)(j) = sum_{i != j} b(i) |i - j|^{-(n - alpha)}, 0 < alpha < n.
// Coincides with apply_T for (alpha, m = 1, alpha_1 = n - alpha, A = Id).
OperatorResult apply_riesz(const LatticeSequence& b, double alpha, const CubeWindow& out);
double riesz_at(const LatticeSequence& b, double alpha, const LatticeIndex& j);

namespace ref {
// Serial reference implementation on an independent evaluation path
// (sqrt + pow rather than integer-ssq exp/log). Kept for testing and as the
// baseline of the benchmark.
LatticeSequence apply_T(const FractionalSpec& spec, const LatticeSequence& b, const CubeWindow& out);
}  // namespace ref

// Centered fractional maximal sequence:
// (M_alpha b)(j) = max over cube radii N of (#Q)^{-(1 - alpha/n)} sum_{i in Q} |b(i)|
// with Q the cube of radius N centered at j. The maximum is attained at some
// N no larger than the radius covering supp(b) from j.
//
// fractional_maximal is the literal serial reference; fractional_maximal_fast
// computes identical values (within 1e-12 relative) from an n-dimensional
// inclusion-exclusion prefix-sum table, parallel across output points.
LatticeSequence fractional_maximal(const LatticeSequence& b, double alpha, const CubeWindow& out);
LatticeSequence fractional_maximal_fast(const LatticeSequence& b, double alpha, const CubeWindow& out);
double maximal_at(const LatticeSequence& b, double alpha, const LatticeIndex& j);

// sum_{|j|_inf >= N} |j|^{-(n+eps)} within the requested absolute precision:
// direct summation over |j|_inf < R plus a certified remainder bound for
// |j|_inf >= R, with R chosen so the remainder bound < precision. The returned
// value underestimates the series by less than `precision`.
double tail_sum(int n, double eps, std::int64_t N, double precision);

// Largest precision guarantee reachable with at most point_budget summed
// lattice points (never tighter than 1e-6 is requested by the harness).
double tail_sum_feasible_precision(int n, double eps, double point_budget);

struct TailEstimate {
    double eps;
    std::int64_t N;
    double bound;
};

// Closed-form majorant 2^n n^{n+eps} (2 + 2^{eps/n} n / eps)^n N^{-eps} of the
// tail sum above, evaluated verbatim.
TailEstimate closed_form_tail_bound(int n, double eps, std::int64_t N);

struct SupportGeometry {
    bool empty = true;
    CubeWindow hull;          // tight bounding cube of supp(b)
    double euclid_radius = 0; // max |i| over supp(b), around the origin
    double l1 = 0;            // |b|_1
};
SupportGeometry support_geometry(const LatticeSequence& b);

// Harness default: origin-centered, radius 4 ceil(D_inv) (support radius +
// |hull center|_inf) + 16.
CubeWindow default_output_window(const FractionalSpec& spec, const LatticeSequence& b);

struct TruncatedNorm {
    double norm = 0.0;   // exact l^q norm over the window
    double tail = 0.0;   // certified bound on the l^q mass outside the window
    bool divergent = false;  // (n - alpha) q <= n: no convergent generic tail rate
};

// Splits |T b|_q into the exact window part and a certified tail bound from
// the pointwise majorant |T b(j)| <= |b|_1 c_geom |j|^{-(n-alpha)} valid
// outside the window.
TruncatedNorm truncated_lq_norm(const OperatorResult& r, double q, double b_l1,
                                const FractionalSpec& spec, const SupportGeometry& geom);

// Same mechanism for the fractional maximal sequence (used by the maximal
// norm-ratio experiment).
TruncatedNorm truncated_lq_norm_maximal(const LatticeSequence& maximal_values, double q,
                                        const SupportGeometry& geom, int n, double alpha);

// Diagnostic split of (T b)(j0), alpha = 0, m = 2, into near-center, middle
// and far partial sums with their maximal-function majorants.
struct RegionDecomposition {
    double part_signed[4];  // signed partial sums over I1..I4
    double part_abs[4];     // partial sums with |b(i)|
    double total;           // (T b)(j0), full signed sum
    double majorant_i1;     // 2^{a2+2a1}/(1-2^{-a2}) (M b)(A1 j0)
    double majorant_i2;     // 2^{a1+2a2}/(1-2^{-a1}) (M b)(A2 j0)
    double majorant_i3;     // (2/d)^n |j0|^{-n} (2 floor((2 sqrt(n) D + 1)|j0|) + 1)^n (M b)(j0)
    double i4_reference;    // |b|_p |j0|^{-n/p}
    double maximal_A1j0, maximal_A2j0, maximal_j0;
    double d_sep;   // certified lower bound on min{|A1 x - A2 x| : |x| = 1}
    double d_fwd;   // max certified upper bound on |A1|, |A2|
    double p;
};
RegionDecomposition region_decompose_alpha0(const FractionalSpec& spec, const LatticeSequence& b,
                                            const LatticeIndex& j0, double p = 2.0);

}  // namespace latfrac
