#include <omp.h>

#include <algorithm>
#include <cmath>

#include "latfrac/operators.hpp"

namespace latfrac {

namespace {

// Shell counts (2r+1)^n - (2r-1)^n are at most 2n (3r)^{n-1} for r >= 1, so
// sum_{|j|_inf >= R} |j|^{-(n+eps)} <= 2n 3^{n-1} (R^{-1-eps} + R^{-eps}/eps).
double remainder_bound(int n, double eps, double R) {
    const double coeff = 2.0 * n * std::pow(3.0, n - 1);
    return coeff * (std::pow(R, -1.0 - eps) + std::pow(R, -eps) / eps);
}

void check_tail_args(int n, double eps, std::int64_t N) {
    if (n < 1) throw invalid_parameter("tail sum: n must be >= 1");
    if (!(eps > 0.0)) throw invalid_parameter("tail sum: eps must be positive");
    if (N < 1) throw invalid_parameter("tail sum: N must be >= 1");
}

constexpr double kPointCap = 2.5e8;  // hard cap on directly summed lattice points

}  // namespace

double tail_sum(int n, double eps, std::int64_t N, double precision) {
    check_tail_args(n, eps, N);
    if (!(precision > 0.0)) throw invalid_parameter("tail_sum: precision must be positive");

    // Smallest R (by doubling + bisection) with certified remainder < precision.
    std::int64_t r_hi = std::max<std::int64_t>(N, 2);
    while (remainder_bound(n, eps, static_cast<double>(r_hi)) >= precision) {
        if (std::pow(2.0 * static_cast<double>(r_hi), n) > kPointCap)
            throw budget_exceeded("tail_sum: requested precision exceeds the point budget");
        r_hi *= 2;
    }
    std::int64_t r_lo = std::max<std::int64_t>(N, 2);
    while (r_lo + 1 < r_hi) {
        const std::int64_t mid = r_lo + (r_hi - r_lo) / 2;
        if (remainder_bound(n, eps, static_cast<double>(mid)) < precision)
            r_hi = mid;
        else
            r_lo = mid;
    }
    const std::int64_t R = r_hi;
    if (std::pow(2.0 * static_cast<double>(R), n) > kPointCap)
        throw budget_exceeded("tail_sum: requested precision exceeds the point budget");

    // Direct sum over N <= |j|_inf < R. Slices along the first coordinate are
    // accumulated in slice order, so the result is independent of the thread
    // count.
    const std::int64_t lim = R - 1;
    const std::int64_t slices = 2 * lim + 1;
    std::vector<double> slice_sum(static_cast<std::size_t>(slices), 0.0);
    const double expo = -(static_cast<double>(n) + eps);

#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < slices; ++s) {
        const std::int64_t j0 = s - lim;
        double acc = 0.0;
        if (n == 1) {
            const std::int64_t a = std::llabs(j0);
            if (a >= N) acc = std::exp(0.5 * expo * std::log(static_cast<double>(j0 * j0)));
        } else {
            LatticeIndex rest(static_cast<std::size_t>(n - 1), -lim);
            const std::int64_t a0 = std::llabs(j0);
            const std::int64_t ssq0 = j0 * j0;
            while (true) {
                std::int64_t sup = a0, ssq = ssq0;
                for (auto c : rest) {
                    const std::int64_t a = std::llabs(c);
                    if (a > sup) sup = a;
                    ssq += c * c;
                }
                if (sup >= N)  // sup < R holds by construction
                    acc += std::exp(0.5 * expo * std::log(static_cast<double>(ssq)));
                int d = n - 2;
                for (; d >= 0; --d) {
                    if (++rest[static_cast<std::size_t>(d)] <= lim) break;
                    rest[static_cast<std::size_t>(d)] = -lim;
                }
                if (d < 0) break;
            }
        }
        slice_sum[static_cast<std::size_t>(s)] = acc;
    }

    double total = 0.0;
    for (double v : slice_sum) total += v;
    return total;
}

double tail_sum_feasible_precision(int n, double eps, double point_budget) {
    if (n < 1) throw invalid_parameter("tail_sum_feasible_precision: n must be >= 1");
    if (!(eps > 0.0)) throw invalid_parameter("tail_sum_feasible_precision: eps must be positive");
    const double budget = std::min(point_budget, kPointCap);
    const double r_cap = std::max(2.0, 0.5 * std::pow(budget, 1.0 / n));
    return std::max(1e-6, 1.05 * remainder_bound(n, eps, r_cap));
}

TailEstimate closed_form_tail_bound(int n, double eps, std::int64_t N) {
    check_tail_args(n, eps, N);
    const double nn = static_cast<double>(n);
    const double bound = std::pow(2.0, nn) * std::pow(nn, nn + eps) *
                         std::pow(2.0 + std::exp2(eps / nn) * nn / eps, nn) *
                         std::pow(static_cast<double>(N), -eps);
    return {eps, N, bound};
}

}  // namespace latfrac
