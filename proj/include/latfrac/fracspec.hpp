#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latfrac/matrix.hpp"

namespace latfrac {

// Parameters (n, alpha, m, alpha_1..alpha_m, A_1..A_m) of the fractional
// series operator: kernel 1 / prod_k |i - A_k j|^{alpha_k} with
// sum_k alpha_k = n - alpha.
struct FractionalSpec {
    int n = 1;
    double alpha = 0.0;
    std::vector<double> exponents;       // alpha_1..alpha_m, all positive
    std::vector<IntegerMatrix> matrices; // A_1..A_m

    int m() const { return static_cast<int>(exponents.size()); }

    // The m = 1, A = Id reduction: kernel |i - j|^{-(n - alpha)}.
    static FractionalSpec riesz(int n, double alpha);
};

struct ValidationIssue {
    std::string rule;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool valid() const { return issues.empty(); }
};

// Checks every structural rule; the report lists each violated one.
ValidationReport validate_spec(const FractionalSpec& s);

// q with 1/q = 1/p - alpha/n. Requires p > 0 and, when alpha > 0, p < n/alpha.
double conjugate_exponent(double p, double alpha, int n);

// floor(n (1/p - 1)) for 0 < p <= 1.
int atom_degree(double p, int n);

struct ExponentPair {
    double p;
    double q;
    static ExponentPair from(double p, double alpha, int n);
};

// max_k certified upper bound on |A_k^{-1}| (spectral norm).
double spec_inv_norm_bound(const FractionalSpec& s);
// max_k certified upper bound on |A_k| (spectral norm).
double spec_fwd_norm_bound(const FractionalSpec& s);

std::uint64_t spec_hash(const FractionalSpec& s);

}  // namespace latfrac
