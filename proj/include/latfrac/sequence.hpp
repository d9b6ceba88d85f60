#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "latfrac/core.hpp"

namespace latfrac {

// Finitely supported real-valued sequence on Z^n.
//
// Dense storage: a value array in row-major order over a cube window.
// Sparse storage: lexicographically sorted (index, value) pairs, unique indices.
// Operators accept both forms; canonical() applies the storage policy
// (below 10% fill of the bounding window -> sparse).
class LatticeSequence {
public:
    LatticeSequence() = default;

    static LatticeSequence dense(CubeWindow w, std::vector<double> values);
    static LatticeSequence sparse(int n, std::vector<std::pair<LatticeIndex, double>> entries);
    static LatticeSequence delta(LatticeIndex at, double value = 1.0);
    static LatticeSequence zeros(CubeWindow w);

    int dim() const { return n_; }
    bool is_dense() const { return dense_; }

    const CubeWindow& window() const;                 // dense only
    std::span<const double> values() const;           // dense only
    std::vector<double>& mutable_values();            // dense only
    const std::vector<std::pair<LatticeIndex, double>>& entries() const;  // sparse only

    double at(const LatticeIndex& i) const;           // 0 outside support
    std::size_t nonzero_count() const;
    bool all_zero() const { return nonzero_count() == 0; }

    // Tight bounding cube of the nonzero support. Returns false when the
    // sequence is identically zero.
    bool support_hull(CubeWindow& hull) const;

    LatticeSequence canonical() const;
    LatticeSequence scaled(double c) const;

    // Visit nonzero entries in the fixed deterministic order (dense: row-major
    // over the window; sparse: lexicographic).
    template <class F>
    void for_each(F&& f) const {
        if (dense_) {
            if (dense_values_.empty()) return;
            LatticeIndex cur = window_.center;
            for (auto& c : cur) c -= window_.radius;
            const int n = n_;
            const auto m = static_cast<std::int64_t>(dense_values_.size());
            for (std::int64_t off = 0; off < m; ++off) {
                if (dense_values_[static_cast<std::size_t>(off)] != 0.0)
                    f(static_cast<const LatticeIndex&>(cur),
                      dense_values_[static_cast<std::size_t>(off)]);
                for (int d = n - 1; d >= 0; --d) {
                    if (++cur[d] <= window_.center[d] + window_.radius) break;
                    cur[d] = window_.center[d] - window_.radius;
                }
            }
        } else {
            for (const auto& [idx, v] : sparse_)
                if (v != 0.0) f(idx, v);
        }
    }

    // Materialized copy of the nonzero support, in for_each order.
    void support_snapshot(std::vector<LatticeIndex>& idx, std::vector<double>& val) const;

private:
    int n_ = 0;
    bool dense_ = false;
    CubeWindow window_;
    std::vector<double> dense_values_;
    std::vector<std::pair<LatticeIndex, double>> sparse_;
};

// (sum |b(i)|^p)^(1/p) in the fixed deterministic order; sup |b(i)| for p = inf.
double lp_norm(const LatticeSequence& b, double p);
double l1_norm(const LatticeSequence& b);
double linf_norm(const LatticeSequence& b);

// sum_k coeffs[k] * seqs[k], exact superposition, canonical storage.
LatticeSequence superpose(std::span<const LatticeSequence> seqs, std::span<const double> coeffs);

}  // namespace latfrac
