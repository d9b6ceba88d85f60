#include "latfrac/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace latfrac {

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m;
    m.n = n;
    m.a.assign(static_cast<std::size_t>(n) * n, mpq_class(0));
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
    RationalMatrix out;
    out.n = n;
    out.a.assign(static_cast<std::size_t>(n) * n, mpq_class(0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const mpq_class& lik = at(i, k);
            if (lik == 0) continue;
            for (int j = 0; j < n; ++j) out.at(i, j) += lik * rhs.at(k, j);
        }
    return out;
}

bool RationalMatrix::is_identity() const {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

mpq_class RationalMatrix::max_abs_row_sum() const {
    mpq_class best = 0;
    for (int i = 0; i < n; ++i) {
        mpq_class s = 0;
        for (int j = 0; j < n; ++j) s += abs(at(i, j));
        if (s > best) best = s;
    }
    return best;
}

mpq_class RationalMatrix::max_abs_col_sum() const {
    mpq_class best = 0;
    for (int j = 0; j < n; ++j) {
        mpq_class s = 0;
        for (int i = 0; i < n; ++i) s += abs(at(i, j));
        if (s > best) best = s;
    }
    return best;
}

mpq_class RationalMatrix::frobenius_squared() const {
    mpq_class s = 0;
    for (const auto& v : a) s += v * v;
    return s;
}

std::vector<mpq_class> RationalMatrix::apply(const LatticeIndex& v) const {
    std::vector<mpq_class> out(static_cast<std::size_t>(n), mpq_class(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i)] += at(i, j) * static_cast<long>(v[static_cast<std::size_t>(j)]);
    return out;
}

namespace {

mpz_class to_mpz(std::int64_t v) {
    // Safe for the full int64 range.
    mpz_class z;
    bool neg = v < 0;
    std::uint64_t mag = neg ? (~static_cast<std::uint64_t>(v) + 1ull) : static_cast<std::uint64_t>(v);
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(mag), 0, 0, &mag);
    if (neg) z = -z;
    return z;
}

// Fraction-free Gaussian elimination; exact over the integers.
mpz_class bareiss_determinant(int n, std::vector<mpz_class> m) {
    if (n == 0) return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (m[static_cast<std::size_t>(k) * n + k] == 0) {
            int piv = -1;
            for (int r = k + 1; r < n; ++r)
                if (m[static_cast<std::size_t>(r) * n + k] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) return 0;
            for (int c = k; c < n; ++c)
                std::swap(m[static_cast<std::size_t>(k) * n + c], m[static_cast<std::size_t>(piv) * n + c]);
            sign = -sign;
        }
        const mpz_class& pivot = m[static_cast<std::size_t>(k) * n + k];
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                mpz_class num = m[static_cast<std::size_t>(i) * n + j] * pivot -
                                m[static_cast<std::size_t>(i) * n + k] * m[static_cast<std::size_t>(k) * n + j];
                mpz_divexact(m[static_cast<std::size_t>(i) * n + j].get_mpz_t(), num.get_mpz_t(),
                             prev.get_mpz_t());
            }
        prev = pivot;
    }
    mpz_class det = m[static_cast<std::size_t>(n - 1) * n + (n - 1)];
    return sign > 0 ? det : mpz_class(-det);
}

}  // namespace

IntegerMatrix::IntegerMatrix(int n, std::vector<std::int64_t> entries) : n_(n), a_(std::move(entries)) {
    if (n < 1) throw invalid_parameter("IntegerMatrix: dimension must be >= 1");
    if (a_.size() != static_cast<std::size_t>(n) * n)
        throw invalid_parameter("IntegerMatrix: entry count must be n*n");
    std::vector<mpz_class> z(a_.size());
    for (std::size_t k = 0; k < a_.size(); ++k) z[k] = to_mpz(a_[k]);
    det_ = bareiss_determinant(n_, std::move(z));
}

IntegerMatrix IntegerMatrix::identity(int n) { return scalar(n, 1); }

IntegerMatrix IntegerMatrix::scalar(int n, std::int64_t v) {
    std::vector<std::int64_t> e(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = v;
    return IntegerMatrix(n, std::move(e));
}

const RationalMatrix& IntegerMatrix::exact_inverse() const {
    if (det_ == 0) throw singular_matrix("exact_inverse: determinant is zero");
    if (inv_) return *inv_;
    RationalMatrix inv;
    inv.n = n_;
    inv.a.assign(static_cast<std::size_t>(n_) * n_, mpq_class(0));
    // adj(A)[j][i] = (-1)^{i+j} det(minor_ij); inverse = adj / det.
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            std::vector<mpz_class> minor;
            minor.reserve(static_cast<std::size_t>(n_ - 1) * (n_ - 1));
            for (int r = 0; r < n_; ++r) {
                if (r == i) continue;
                for (int c = 0; c < n_; ++c) {
                    if (c == j) continue;
                    minor.push_back(to_mpz(at(r, c)));
                }
            }
            mpz_class cof = bareiss_determinant(n_ - 1, std::move(minor));
            if ((i + j) & 1) cof = -cof;
            mpq_class q(cof);
            q /= mpq_class(det_);
            q.canonicalize();
            inv.at(j, i) = q;
        }
    inv_ = std::move(inv);
    return *inv_;
}

LatticeIndex IntegerMatrix::apply(const LatticeIndex& v) const {
    LatticeIndex out(static_cast<std::size_t>(n_));
    apply_into(v, out);
    return out;
}

void IntegerMatrix::apply_into(const LatticeIndex& v, LatticeIndex& out) const {
    out.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        std::int64_t acc = 0;
        for (int j = 0; j < n_; ++j) acc += at(i, j) * v[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = acc;
    }
}

IntegerMatrix IntegerMatrix::minus(const IntegerMatrix& rhs) const {
    if (rhs.n_ != n_) throw invalid_parameter("minus: dimension mismatch");
    std::vector<std::int64_t> e(a_.size());
    for (std::size_t k = 0; k < a_.size(); ++k) e[k] = a_[k] - rhs.a_[k];
    return IntegerMatrix(n_, std::move(e));
}

double IntegerMatrix::max_abs_row_sum() const {
    double best = 0.0;
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += std::fabs(static_cast<double>(at(i, j)));
        best = std::max(best, s);
    }
    return best;
}

IntegerMatrix::NormBounds IntegerMatrix::norm_bounds() const {
    const double sqrt_n = std::sqrt(static_cast<double>(n_));
    const double upper = sqrt_n * max_abs_row_sum();
    if (det_ == 0) return {upper, 0.0};
    const RationalMatrix& inv = exact_inverse();
    const mpq_class row = inv.max_abs_row_sum();
    const mpq_class col = inv.max_abs_col_sum();
    const mpq_class fro2 = inv.frobenius_squared();
    // Three certified upper bounds on |A^{-1}|_2; the smallest wins. The
    // sqrt(row*col) bound makes the identity (and any signed permutation)
    // come out exact.
    const double b1 = sqrt_n * row.get_d();
    const double b2 = std::sqrt(mpq_class(row * col).get_d());
    const double b3 = std::sqrt(fro2.get_d());
    const double inv_norm_ub = std::min({b1, b2, b3});
    return {upper, 1.0 / inv_norm_ub};
}

}  // namespace latfrac
