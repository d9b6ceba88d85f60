#include "latfrac/fracspec.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace latfrac {

FractionalSpec FractionalSpec::riesz(int n, double alpha) {
    FractionalSpec s;
    s.n = n;
    s.alpha = alpha;
    s.exponents = {static_cast<double>(n) - alpha};
    s.matrices = {IntegerMatrix::identity(n)};
    return s;
}

namespace {
std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}
}  // namespace

ValidationReport validate_spec(const FractionalSpec& s) {
    ValidationReport rep;
    auto fail = [&](std::string rule, std::string detail) {
        rep.issues.push_back({std::move(rule), std::move(detail)});
    };

    if (s.n < 1) fail("dimension", "n must be >= 1");
    if (!(s.alpha >= 0.0) || !(s.alpha < s.n))
        fail("alpha-range", "alpha must lie in [0, n)");
    const int m = s.m();
    if (m < 1) fail("order", "m must be >= 1");
    if (s.alpha == 0.0 && m < 2) fail("order", "m must be >= 2 when alpha = 0");
    if (static_cast<int>(s.matrices.size()) != m)
        fail("shape", "need exactly one matrix per exponent");

    double sum = 0.0;
    for (int k = 0; k < m; ++k) {
        if (!(s.exponents[static_cast<std::size_t>(k)] > 0.0))
            fail("exponent-positivity", "alpha_" + std::to_string(k + 1) + " must be positive");
        sum += s.exponents[static_cast<std::size_t>(k)];
    }
    const double target = static_cast<double>(s.n) - s.alpha;
    if (std::fabs(sum - target) > 1e-12)
        fail("exponent-sum", "sum of exponents is " + fmt("%.17g", sum) + ", expected n - alpha = " +
                                 fmt("%.17g", target));

    for (std::size_t k = 0; k < s.matrices.size(); ++k) {
        if (s.matrices[k].dim() != s.n) {
            fail("matrix-shape", "A_" + std::to_string(k + 1) + " is not " + std::to_string(s.n) +
                                     "x" + std::to_string(s.n));
            continue;
        }
        if (!s.matrices[k].invertible())
            fail("matrix-invertible", "A_" + std::to_string(k + 1) + " is singular");
    }
    if (s.alpha == 0.0) {
        for (std::size_t k = 0; k < s.matrices.size(); ++k)
            for (std::size_t l = k + 1; l < s.matrices.size(); ++l) {
                if (s.matrices[k].dim() != s.n || s.matrices[l].dim() != s.n) continue;
                if (!s.matrices[k].minus(s.matrices[l]).invertible())
                    fail("difference-invertible", "A_" + std::to_string(k + 1) + " - A_" +
                                                      std::to_string(l + 1) + " is singular");
            }
    }
    return rep;
}

double conjugate_exponent(double p, double alpha, int n) {
    if (!(p > 0.0)) throw invalid_parameter("conjugate_exponent: p must be positive");
    if (alpha > 0.0 && !(p < static_cast<double>(n) / alpha))
        throw std::out_of_range("conjugate_exponent: requires p < n/alpha when alpha > 0");
    const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
    const double inv_q = inv_p - alpha / static_cast<double>(n);
    if (inv_q == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / inv_q;
}

int atom_degree(double p, int n) {
    if (!(p > 0.0) || !(p <= 1.0)) throw invalid_parameter("atom_degree: p must lie in (0, 1]");
    const double x = static_cast<double>(n) * (1.0 / p - 1.0);
    // The nudge absorbs representation error of p (e.g. p = 2/3) without
    // moving genuinely non-integer values across the floor.
    return static_cast<int>(std::floor(x + 1e-9));
}

ExponentPair ExponentPair::from(double p, double alpha, int n) {
    return {p, conjugate_exponent(p, alpha, n)};
}

double spec_inv_norm_bound(const FractionalSpec& s) {
    double best = 0.0;
    for (const auto& A : s.matrices) {
        const auto& inv = A.exact_inverse();
        // sqrt(n) * max abs row sum of A^{-1}, rational row sums.
        const double b = std::sqrt(static_cast<double>(s.n)) * inv.max_abs_row_sum().get_d();
        best = std::max(best, b);
    }
    return best;
}

double spec_fwd_norm_bound(const FractionalSpec& s) {
    double best = 0.0;
    for (const auto& A : s.matrices) best = std::max(best, A.norm_bounds().upper);
    return best;
}

std::uint64_t spec_hash(const FractionalSpec& s) {
    // FNV-1a over a canonical text form.
    std::string text = "n=" + std::to_string(s.n) + ";a=" + fmt("%.17g", s.alpha) + ";e=";
    for (double e : s.exponents) text += fmt("%.17g", e) + ",";
    text += ";M=";
    for (const auto& A : s.matrices) {
        for (auto v : A.entries()) text += std::to_string(v) + ",";
        text += "|";
    }
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace latfrac
