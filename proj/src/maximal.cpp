#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "latfrac/operators.hpp"

namespace latfrac {

namespace {

// (#Q)^{-(1 - alpha/n)} = (2N+1)^{-(n-alpha)}; shared by every maximal path so
// the fast/reference comparison is meaningful at 1e-12.
inline double cube_normalizer(std::int64_t N, int n, double alpha) {
    return std::exp(-(static_cast<double>(n) - alpha) *
                    std::log(static_cast<double>(2 * N + 1)));
}

void check_alpha(int n, double alpha) {
    if (!(alpha >= 0.0) || !(alpha < n))
        throw invalid_parameter("fractional maximal: alpha must lie in [0, n)");
}

// Smallest radius whose cube centered at j covers the hull.
std::int64_t cover_radius(const CubeWindow& hull, const LatticeIndex& j) {
    std::int64_t r = 0;
    for (std::size_t d = 0; d < j.size(); ++d) {
        const std::int64_t lo = hull.center[d] - hull.radius;
        const std::int64_t hi = hull.center[d] + hull.radius;
        r = std::max(r, std::max(hi - j[d], j[d] - lo));
    }
    return std::max<std::int64_t>(r, 0);
}

}  // namespace

LatticeSequence fractional_maximal(const LatticeSequence& b, double alpha, const CubeWindow& out) {
    const int n = b.dim();
    check_alpha(n, alpha);
    if (out.dim() != n) throw invalid_parameter("fractional_maximal: dimension mismatch");

    CubeWindow hull;
    const bool nonzero = b.support_hull(hull);
    const std::int64_t card = out.cardinality();
    std::vector<double> vals(static_cast<std::size_t>(card), 0.0);
    if (!nonzero) return LatticeSequence::dense(out, std::move(vals));

    std::vector<LatticeIndex> sidx;
    std::vector<double> sval;
    b.support_snapshot(sidx, sval);

    LatticeIndex j(static_cast<std::size_t>(n));
    for (std::int64_t off = 0; off < card; ++off) {
        out.index_at_into(off, j);
        const std::int64_t n_max = cover_radius(hull, j);
        double best = 0.0;
        for (std::int64_t N = 0; N <= n_max; ++N) {
            double sum = 0.0;
            for (std::size_t t = 0; t < sidx.size(); ++t) {
                std::int64_t d_inf = 0;
                for (std::size_t d = 0; d < j.size(); ++d) {
                    const std::int64_t a = std::llabs(sidx[t][d] - j[d]);
                    if (a > d_inf) d_inf = a;
                }
                if (d_inf <= N) sum += std::fabs(sval[t]);
            }
            best = std::max(best, cube_normalizer(N, n, alpha) * sum);
        }
        vals[static_cast<std::size_t>(off)] = best;
    }
    return LatticeSequence::dense(out, std::move(vals));
}

LatticeSequence fractional_maximal_fast(const LatticeSequence& b, double alpha,
                                        const CubeWindow& out) {
    const int n = b.dim();
    check_alpha(n, alpha);
    if (out.dim() != n) throw invalid_parameter("fractional_maximal_fast: dimension mismatch");
    if (!b.is_dense())
        throw invalid_parameter("fractional_maximal_fast: requires a dense input");
    if (n > 8) throw invalid_parameter("fractional_maximal_fast: supports n <= 8");

    const CubeWindow& w = b.window();
    const std::int64_t side = w.side();
    const std::int64_t tside = side + 1;

    // Exclusive prefix-sum table of |b| over the window: P[c] = sum of cells
    // with every local coordinate < c_d. Cube sums become 2^n corner lookups.
    std::vector<std::int64_t> tstride(static_cast<std::size_t>(n));
    std::int64_t tcells = 1;
    for (int d = n - 1; d >= 0; --d) {
        tstride[static_cast<std::size_t>(d)] = tcells;
        tcells *= tside;
    }
    std::vector<double> table(static_cast<std::size_t>(tcells), 0.0);
    {
        const auto vals_in = b.values();
        LatticeIndex local(static_cast<std::size_t>(n), 0);
        for (std::int64_t off = 0; off < static_cast<std::int64_t>(vals_in.size()); ++off) {
            std::int64_t toff = 0;
            for (int d = 0; d < n; ++d)
                toff += (local[static_cast<std::size_t>(d)] + 1) * tstride[static_cast<std::size_t>(d)];
            table[static_cast<std::size_t>(toff)] = std::fabs(vals_in[static_cast<std::size_t>(off)]);
            for (int d = n - 1; d >= 0; --d) {
                if (++local[static_cast<std::size_t>(d)] < side) break;
                local[static_cast<std::size_t>(d)] = 0;
            }
        }
        for (int axis = 0; axis < n; ++axis) {
            const std::int64_t s = tstride[static_cast<std::size_t>(axis)];
            for (std::int64_t off = 0; off < tcells; ++off) {
                const std::int64_t coord = (off / s) % tside;
                if (coord > 0) table[static_cast<std::size_t>(off)] +=
                    table[static_cast<std::size_t>(off - s)];
            }
        }
    }

    LatticeIndex wlo(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) wlo[static_cast<std::size_t>(d)] = w.center[d] - w.radius;

    const std::int64_t card = out.cardinality();
    std::vector<double> vals(static_cast<std::size_t>(card), 0.0);
    const int corners = 1 << n;

#pragma omp parallel
    {
        LatticeIndex j(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
        for (std::int64_t off = 0; off < card; ++off) {
            out.index_at_into(off, j);
            const std::int64_t n_max = cover_radius(w, j);
            double best = 0.0;
            for (std::int64_t N = 0; N <= n_max; ++N) {
                // Intersection of the cube around j with the storage window,
                // in local coordinates.
                bool empty = false;
                std::int64_t lo[8], hi[8];
                for (int d = 0; d < n; ++d) {
                    lo[d] = std::max<std::int64_t>(0, j[static_cast<std::size_t>(d)] - N -
                                                          wlo[static_cast<std::size_t>(d)]);
                    hi[d] = std::min<std::int64_t>(side - 1, j[static_cast<std::size_t>(d)] + N -
                                                                 wlo[static_cast<std::size_t>(d)]);
                    if (lo[d] > hi[d]) {
                        empty = true;
                        break;
                    }
                }
                if (empty) continue;
                double box = 0.0;
                for (int c = 0; c < corners; ++c) {
                    std::int64_t toff = 0;
                    int neg = 0;
                    for (int d = 0; d < n; ++d) {
                        if (c & (1 << d)) {
                            toff += lo[d] * tstride[static_cast<std::size_t>(d)];
                            ++neg;
                        } else {
                            toff += (hi[d] + 1) * tstride[static_cast<std::size_t>(d)];
                        }
                    }
                    const double term = table[static_cast<std::size_t>(toff)];
                    box += (neg & 1) ? -term : term;
                }
                box = std::max(box, 0.0);
                best = std::max(best, cube_normalizer(N, n, alpha) * box);
            }
            vals[static_cast<std::size_t>(off)] = best;
        }
    }
    return LatticeSequence::dense(out, std::move(vals));
}

double maximal_at(const LatticeSequence& b, double alpha, const LatticeIndex& j) {
    const int n = b.dim();
    check_alpha(n, alpha);
    CubeWindow hull;
    if (!b.support_hull(hull)) return 0.0;
    const std::int64_t n_max = cover_radius(hull, j);

    // Bucket the support by sup-distance, then scan radii once.
    std::vector<double> by_radius(static_cast<std::size_t>(n_max) + 1, 0.0);
    b.for_each([&](const LatticeIndex& i, double v) {
        std::int64_t d_inf = 0;
        for (std::size_t d = 0; d < j.size(); ++d) {
            const std::int64_t a = std::llabs(i[d] - j[d]);
            if (a > d_inf) d_inf = a;
        }
        by_radius[static_cast<std::size_t>(d_inf)] += std::fabs(v);
    });
    double best = 0.0;
    double running = 0.0;
    for (std::int64_t N = 0; N <= n_max; ++N) {
        running += by_radius[static_cast<std::size_t>(N)];
        best = std::max(best, cube_normalizer(N, n, alpha) * running);
    }
    return best;
}

}  // namespace latfrac
