#include "latfrac/operators.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>

namespace latfrac {

namespace {

// |v|^e evaluated as exp((e/2) log(sum of squares)) with the sum of squares
// carried in integer arithmetic; removes cancellation from the distance
// computation.
inline double pow_of_ssq(std::int64_t ssq, double e) {
    return std::exp(0.5 * e * std::log(static_cast<double>(ssq)));
}

inline std::int64_t diff_ssq(const LatticeIndex& a, const LatticeIndex& b) {
    std::int64_t s = 0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const std::int64_t x = a[d] - b[d];
        s += x * x;
    }
    return s;
}

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct Support {
    std::vector<LatticeIndex> idx;
    std::vector<double> val;
};

// Kernel sum at one output point; terms where i coincides with any image
// A_k j are excluded, matching the summation domain of the operator.
double eval_point(const FractionalSpec& spec, const Support& sup,
                  const std::vector<LatticeIndex>& images) {
    const int m = spec.m();
    double acc = 0.0;
    const std::size_t s = sup.idx.size();
    for (std::size_t t = 0; t < s; ++t) {
        const LatticeIndex& i = sup.idx[t];
        bool excluded = false;
        double denom = 1.0;
        for (int k = 0; k < m; ++k) {
            const std::int64_t ssq = diff_ssq(i, images[static_cast<std::size_t>(k)]);
            if (ssq == 0) {
                excluded = true;
                break;
            }
            denom *= pow_of_ssq(ssq, spec.exponents[static_cast<std::size_t>(k)]);
        }
        if (!excluded) acc += sup.val[t] / denom;
    }
    return acc;
}

void require_valid(const FractionalSpec& spec) {
    const ValidationReport rep = validate_spec(spec);
    if (!rep.valid()) {
        std::string msg = "invalid operator parameters:";
        for (const auto& iss : rep.issues) msg += " [" + iss.rule + "] " + iss.detail + ";";
        throw invalid_parameter(msg);
    }
}

}  // namespace

OperatorResult apply_T(const FractionalSpec& spec, const LatticeSequence& b, const CubeWindow& out) {
    require_valid(spec);
    if (b.dim() != spec.n || out.dim() != spec.n)
        throw invalid_parameter("apply_T: dimension mismatch");
    const double t0 = now_ms();

    Support sup;
    b.support_snapshot(sup.idx, sup.val);

    const std::int64_t card = out.cardinality();
    std::vector<double> vals(static_cast<std::size_t>(card), 0.0);
    const int m = spec.m();

#pragma omp parallel
    {
        LatticeIndex j(static_cast<std::size_t>(spec.n));
        std::vector<LatticeIndex> images(static_cast<std::size_t>(m),
                                         LatticeIndex(static_cast<std::size_t>(spec.n)));
#pragma omp for schedule(static)
        for (std::int64_t off = 0; off < card; ++off) {
            out.index_at_into(off, j);
            for (int k = 0; k < m; ++k)
                spec.matrices[static_cast<std::size_t>(k)].apply_into(j, images[static_cast<std::size_t>(k)]);
            vals[static_cast<std::size_t>(off)] = eval_point(spec, sup, images);
        }
    }

    OperatorResult res;
    res.values = LatticeSequence::dense(out, std::move(vals));
    res.meta.spec_hash = spec_hash(spec);
    res.meta.window = out;
    res.meta.wall_ms = now_ms() - t0;
    return res;
}

double apply_T_at(const FractionalSpec& spec, const LatticeSequence& b, const LatticeIndex& j) {
    require_valid(spec);
    if (b.dim() != spec.n || static_cast<int>(j.size()) != spec.n)
        throw invalid_parameter("apply_T_at: dimension mismatch");
    Support sup;
    b.support_snapshot(sup.idx, sup.val);
    std::vector<LatticeIndex> images;
    images.reserve(spec.matrices.size());
    for (const auto& A : spec.matrices) images.push_back(A.apply(j));
    return eval_point(spec, sup, images);
}

OperatorResult apply_riesz(const LatticeSequence& b, double alpha, const CubeWindow& out) {
    const int n = b.dim();
    if (!(alpha > 0.0) || !(alpha < n))
        throw invalid_parameter("apply_riesz: alpha must lie in (0, n)");
    return apply_T(FractionalSpec::riesz(n, alpha), b, out);
}

double riesz_at(const LatticeSequence& b, double alpha, const LatticeIndex& j) {
    const int n = b.dim();
    if (!(alpha > 0.0) || !(alpha < n))
        throw invalid_parameter("riesz_at: alpha must lie in (0, n)");
    return apply_T_at(FractionalSpec::riesz(n, alpha), b, j);
}

namespace ref {

LatticeSequence apply_T(const FractionalSpec& spec, const LatticeSequence& b, const CubeWindow& out) {
    require_valid(spec);
    if (b.dim() != spec.n || out.dim() != spec.n)
        throw invalid_parameter("ref::apply_T: dimension mismatch");
    Support sup;
    b.support_snapshot(sup.idx, sup.val);

    const std::int64_t card = out.cardinality();
    std::vector<double> vals(static_cast<std::size_t>(card), 0.0);
    const int m = spec.m();
    LatticeIndex j(static_cast<std::size_t>(spec.n));
    std::vector<LatticeIndex> images(static_cast<std::size_t>(m),
                                     LatticeIndex(static_cast<std::size_t>(spec.n)));
    for (std::int64_t off = 0; off < card; ++off) {
        out.index_at_into(off, j);
        for (int k = 0; k < m; ++k)
            spec.matrices[static_cast<std::size_t>(k)].apply_into(j, images[static_cast<std::size_t>(k)]);
        double acc = 0.0;
        for (std::size_t t = 0; t < sup.idx.size(); ++t) {
            bool excluded = false;
            double denom = 1.0;
            for (int k = 0; k < m; ++k) {
                const double dist = std::sqrt(
                    static_cast<double>(diff_ssq(sup.idx[t], images[static_cast<std::size_t>(k)])));
                if (dist == 0.0) {
                    excluded = true;
                    break;
                }
                denom *= std::pow(dist, spec.exponents[static_cast<std::size_t>(k)]);
            }
            if (!excluded) acc += sup.val[t] / denom;
        }
        vals[static_cast<std::size_t>(off)] = acc;
    }
    return LatticeSequence::dense(out, std::move(vals));
}

}  // namespace ref

SupportGeometry support_geometry(const LatticeSequence& b) {
    SupportGeometry g;
    CubeWindow hull;
    if (!b.support_hull(hull)) return g;
    g.empty = false;
    g.hull = hull;
    double rmax = 0.0, l1 = 0.0;
    b.for_each([&](const LatticeIndex& i, double v) {
        rmax = std::max(rmax, euclidean_norm(i));
        l1 += std::fabs(v);
    });
    g.euclid_radius = rmax;
    g.l1 = l1;
    return g;
}

CubeWindow default_output_window(const FractionalSpec& spec, const LatticeSequence& b) {
    const SupportGeometry g = support_geometry(b);
    const double d_inv = spec_inv_norm_bound(spec);
    const std::int64_t d_ceil = static_cast<std::int64_t>(std::ceil(d_inv));
    std::int64_t extent = 0;
    if (!g.empty) extent = g.hull.radius + sup_norm(g.hull.center);
    const std::int64_t radius = 4 * d_ceil * extent + 16;
    return CubeWindow{LatticeIndex(static_cast<std::size_t>(spec.n), 0), radius};
}

TruncatedNorm truncated_lq_norm(const OperatorResult& r, double q, double b_l1,
                                const FractionalSpec& spec, const SupportGeometry& geom) {
    if (!(q > 0.0)) throw invalid_parameter("truncated_lq_norm: q must be positive");
    TruncatedNorm out;
    double acc = 0.0;
    for (double v : r.values.values()) acc += std::pow(std::fabs(v), q);
    out.norm = std::pow(acc, 1.0 / q);

    const int n = spec.n;
    const double eps = (static_cast<double>(n) - spec.alpha) * q - static_cast<double>(n);
    if (!(eps > 0.0)) {
        out.divergent = true;
        return out;
    }
    if (geom.empty) return out;  // zero input: zero tail

    const CubeWindow& w = r.values.window();
    const std::int64_t min_sup_outside = w.radius + 1 - sup_norm(w.center);
    if (min_sup_outside < 1)
        throw invalid_parameter("truncated_lq_norm: window too small for a certified tail");

    // Outside the window, |i - A_k j| >= lower_k |j| - rho >= g_k |j| with
    // g_k = lower_k - rho / J > 0 required.
    double c_geom = 1.0;
    for (int k = 0; k < spec.m(); ++k) {
        const double lower = spec.matrices[static_cast<std::size_t>(k)].norm_bounds().lower;
        const double gk = lower - geom.euclid_radius / static_cast<double>(min_sup_outside);
        if (!(gk > 0.0))
            throw invalid_parameter(
                "truncated_lq_norm: window too small relative to the support radius");
        c_geom *= std::pow(gk, -spec.exponents[static_cast<std::size_t>(k)]);
    }
    const double mass = closed_form_tail_bound(n, eps, min_sup_outside).bound;
    out.tail = b_l1 * c_geom * std::pow(mass, 1.0 / q);
    return out;
}

TruncatedNorm truncated_lq_norm_maximal(const LatticeSequence& maximal_values, double q,
                                        const SupportGeometry& geom, int n, double alpha) {
    if (!(q > 0.0)) throw invalid_parameter("truncated_lq_norm_maximal: q must be positive");
    TruncatedNorm out;
    double acc = 0.0;
    for (double v : maximal_values.values()) acc += std::pow(std::fabs(v), q);
    out.norm = std::pow(acc, 1.0 / q);

    const double eps = (static_cast<double>(n) - alpha) * q - static_cast<double>(n);
    if (!(eps > 0.0)) {
        out.divergent = true;
        return out;
    }
    if (geom.empty) return out;

    const CubeWindow& w = maximal_values.window();
    LatticeIndex rel(w.center.size());
    for (std::size_t d = 0; d < rel.size(); ++d) rel[d] = w.center[d] - geom.hull.center[d];
    const std::int64_t min_u = w.radius + 1 - sup_norm(rel);
    if (min_u < 1 || min_u < 2 * geom.hull.radius)
        throw invalid_parameter("truncated_lq_norm_maximal: window too small for a certified tail");

    // For |u|_inf >= 2 rho: dist to the support >= |u|_inf / 2, so
    // (M_alpha b)(j) <= |b|_1 |u|_inf^{-(n-alpha)}; sup-norm powers are
    // dominated by n^{(n+eps)/2} times the euclidean-power tail.
    const double mass = std::pow(static_cast<double>(n), 0.5 * (static_cast<double>(n) + eps)) *
                        closed_form_tail_bound(n, eps, min_u).bound;
    out.tail = geom.l1 * std::pow(mass, 1.0 / q);
    return out;
}

RegionDecomposition region_decompose_alpha0(const FractionalSpec& spec, const LatticeSequence& b,
                                            const LatticeIndex& j0, double p) {
    require_valid(spec);
    if (spec.alpha != 0.0 || spec.m() != 2)
        throw invalid_parameter("region_decompose_alpha0: requires alpha = 0 and m = 2");
    if (static_cast<int>(j0.size()) != spec.n || b.dim() != spec.n)
        throw invalid_parameter("region_decompose_alpha0: dimension mismatch");
    if (sup_norm(j0) == 0)
        throw invalid_parameter("region_decompose_alpha0: j0 must be nonzero");
    if (!(p >= 1.0)) throw invalid_parameter("region_decompose_alpha0: p must be >= 1");

    const int n = spec.n;
    const double a1 = spec.exponents[0];
    const double a2 = spec.exponents[1];
    const IntegerMatrix& A1 = spec.matrices[0];
    const IntegerMatrix& A2 = spec.matrices[1];

    RegionDecomposition dec{};
    dec.p = p;
    dec.d_sep = A1.minus(A2).norm_bounds().lower;
    dec.d_fwd = std::max(A1.norm_bounds().upper, A2.norm_bounds().upper);

    const LatticeIndex img1 = A1.apply(j0);
    const LatticeIndex img2 = A2.apply(j0);
    const double norm_j0 = euclidean_norm(j0);
    const double near_radius = 0.5 * dec.d_sep * norm_j0;            // euclidean
    const double near_radius_sq = near_radius * near_radius;
    const double mid_radius = 2.0 * std::sqrt(static_cast<double>(n)) * dec.d_fwd * norm_j0;
    const double mid_radius_sq = mid_radius * mid_radius;

    for (int k = 0; k < 4; ++k) {
        dec.part_signed[k] = 0.0;
        dec.part_abs[k] = 0.0;
    }

    b.for_each([&](const LatticeIndex& i, double v) {
        const std::int64_t ssq1 = diff_ssq(i, img1);
        const std::int64_t ssq2 = diff_ssq(i, img2);
        if (ssq1 == 0 || ssq2 == 0) return;  // outside the summation domain
        int region;
        if (static_cast<double>(ssq1) <= near_radius_sq)
            region = 0;
        else if (static_cast<double>(ssq2) <= near_radius_sq)
            region = 1;
        else if (static_cast<double>(squared_norm(i)) < mid_radius_sq)
            region = 2;
        else
            region = 3;
        const double term = v / (pow_of_ssq(ssq1, a1) * pow_of_ssq(ssq2, a2));
        dec.part_signed[region] += term;
        dec.part_abs[region] += std::fabs(term);
    });

    dec.total = apply_T_at(spec, b, j0);

    dec.maximal_A1j0 = maximal_at(b, 0.0, img1);
    dec.maximal_A2j0 = maximal_at(b, 0.0, img2);
    dec.maximal_j0 = maximal_at(b, 0.0, j0);

    dec.majorant_i1 = std::exp2(a2 + 2.0 * a1) / (1.0 - std::exp2(-a2)) * dec.maximal_A1j0;
    dec.majorant_i2 = std::exp2(a1 + 2.0 * a2) / (1.0 - std::exp2(-a1)) * dec.maximal_A2j0;

    const double mid_plus = (2.0 * std::sqrt(static_cast<double>(n)) * dec.d_fwd + 1.0) * norm_j0;
    const double n3 = std::floor(mid_plus);
    dec.majorant_i3 = std::pow(2.0 / dec.d_sep, n) * std::pow(norm_j0, -n) *
                      std::pow(2.0 * n3 + 1.0, n) * dec.maximal_j0;

    dec.i4_reference = lp_norm(b, p) * std::pow(norm_j0, -static_cast<double>(n) / p);
    return dec;
}

}  // namespace latfrac
