#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "latfrac/core.hpp"

namespace latfrac {

// Square matrix over the rationals, row-major mpq entries.
struct RationalMatrix {
    int n = 0;
    std::vector<mpq_class> a;

    static RationalMatrix identity(int n);
    const mpq_class& at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
    mpq_class& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }

    RationalMatrix operator*(const RationalMatrix& rhs) const;
    bool is_identity() const;

    mpq_class max_abs_row_sum() const;
    mpq_class max_abs_col_sum() const;
    mpq_class frobenius_squared() const;

    // Exact rational matrix-vector product.
    std::vector<mpq_class> apply(const LatticeIndex& v) const;
};

// Integer n x n matrix with exact determinant and adjugate-based inverse.
class IntegerMatrix {
public:
    IntegerMatrix() = default;
    IntegerMatrix(int n, std::vector<std::int64_t> entries);  // row-major

    static IntegerMatrix identity(int n);
    static IntegerMatrix scalar(int n, std::int64_t v);

    int dim() const { return n_; }
    std::int64_t at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<std::int64_t>& entries() const { return a_; }

    const mpz_class& determinant() const { return det_; }
    bool invertible() const { return det_ != 0; }

    // adjugate / determinant in exact rational arithmetic; throws singular_matrix.
    const RationalMatrix& exact_inverse() const;

    LatticeIndex apply(const LatticeIndex& v) const;
    void apply_into(const LatticeIndex& v, LatticeIndex& out) const;
    IntegerMatrix minus(const IntegerMatrix& rhs) const;

    double max_abs_row_sum() const;

    // upper: certified upper bound on the spectral norm (sqrt(n) * max abs row
    // sum). lower: certified lower bound on the smallest singular value
    // (reciprocal of the best of three certified upper bounds on the spectral
    // norm of the exact inverse); 0 when singular.
    struct NormBounds {
        double upper;
        double lower;
    };
    NormBounds norm_bounds() const;

    bool operator==(const IntegerMatrix& rhs) const { return n_ == rhs.n_ && a_ == rhs.a_; }

private:
    int n_ = 0;
    std::vector<std::int64_t> a_;
    mpz_class det_;
    mutable std::optional<RationalMatrix> inv_;
};

}  // namespace latfrac
