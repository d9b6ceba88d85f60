#include "latfrac/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace latfrac {

LatticeSequence LatticeSequence::dense(CubeWindow w, std::vector<double> values) {
    if (w.center.empty()) throw invalid_parameter("dense sequence: dimension must be >= 1");
    if (static_cast<std::int64_t>(values.size()) != w.cardinality())
        throw invalid_parameter("dense sequence: value count does not match window cardinality");
    LatticeSequence s;
    s.n_ = w.dim();
    s.dense_ = true;
    s.window_ = std::move(w);
    s.dense_values_ = std::move(values);
    return s;
}

LatticeSequence LatticeSequence::sparse(int n, std::vector<std::pair<LatticeIndex, double>> entries) {
    if (n < 1) throw invalid_parameter("sparse sequence: dimension must be >= 1");
    for (const auto& [idx, v] : entries) {
        (void)v;
        if (static_cast<int>(idx.size()) != n)
            throw invalid_parameter("sparse sequence: index dimension mismatch");
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 1; k < entries.size(); ++k)
        if (entries[k].first == entries[k - 1].first)
            throw invalid_parameter("sparse sequence: duplicate index");
    LatticeSequence s;
    s.n_ = n;
    s.dense_ = false;
    s.sparse_ = std::move(entries);
    return s;
}

LatticeSequence LatticeSequence::delta(LatticeIndex at, double value) {
    const int n = static_cast<int>(at.size());
    return sparse(n, {{std::move(at), value}});
}

LatticeSequence LatticeSequence::zeros(CubeWindow w) {
    std::vector<double> v(static_cast<std::size_t>(w.cardinality()), 0.0);
    return dense(std::move(w), std::move(v));
}

const CubeWindow& LatticeSequence::window() const {
    if (!dense_) throw invalid_parameter("window(): sequence is sparse");
    return window_;
}

std::span<const double> LatticeSequence::values() const {
    if (!dense_) throw invalid_parameter("values(): sequence is sparse");
    return dense_values_;
}

std::vector<double>& LatticeSequence::mutable_values() {
    if (!dense_) throw invalid_parameter("mutable_values(): sequence is sparse");
    return dense_values_;
}

const std::vector<std::pair<LatticeIndex, double>>& LatticeSequence::entries() const {
    if (dense_) throw invalid_parameter("entries(): sequence is dense");
    return sparse_;
}

double LatticeSequence::at(const LatticeIndex& i) const {
    if (dense_) {
        if (!window_.contains(i)) return 0.0;
        return dense_values_[static_cast<std::size_t>(window_.offset_of(i))];
    }
    auto it = std::lower_bound(sparse_.begin(), sparse_.end(), i,
                               [](const auto& e, const LatticeIndex& key) { return e.first < key; });
    if (it != sparse_.end() && it->first == i) return it->second;
    return 0.0;
}

std::size_t LatticeSequence::nonzero_count() const {
    std::size_t c = 0;
    if (dense_) {
        for (double v : dense_values_)
            if (v != 0.0) ++c;
    } else {
        for (const auto& [idx, v] : sparse_) {
            (void)idx;
            if (v != 0.0) ++c;
        }
    }
    return c;
}

bool LatticeSequence::support_hull(CubeWindow& hull) const {
    LatticeIndex lo, hi;
    bool any = false;
    for_each([&](const LatticeIndex& i, double) {
        if (!any) {
            lo = i;
            hi = i;
            any = true;
            return;
        }
        for (int d = 0; d < n_; ++d) {
            lo[d] = std::min(lo[d], i[d]);
            hi[d] = std::max(hi[d], i[d]);
        }
    });
    if (!any) return false;
    // Smallest cube containing [lo, hi]: center at the midpoint (rounded toward
    // lo), radius the largest half-extent.
    LatticeIndex center(static_cast<std::size_t>(n_));
    std::int64_t radius = 0;
    for (int d = 0; d < n_; ++d) {
        center[d] = lo[d] + (hi[d] - lo[d]) / 2;
        radius = std::max(radius, std::max(hi[d] - center[d], center[d] - lo[d]));
    }
    hull = CubeWindow{std::move(center), radius};
    return true;
}

LatticeSequence LatticeSequence::canonical() const {
    CubeWindow hull;
    if (!support_hull(hull)) return sparse(n_, {});
    const std::int64_t card = hull.cardinality();
    const std::size_t nnz = nonzero_count();
    const bool want_dense = 10 * static_cast<std::int64_t>(nnz) >= card;
    if (want_dense) {
        std::vector<double> vals(static_cast<std::size_t>(card), 0.0);
        for_each([&](const LatticeIndex& i, double v) {
            vals[static_cast<std::size_t>(hull.offset_of(i))] = v;
        });
        return dense(std::move(hull), std::move(vals));
    }
    std::vector<std::pair<LatticeIndex, double>> ent;
    ent.reserve(nnz);
    for_each([&](const LatticeIndex& i, double v) { ent.emplace_back(i, v); });
    return sparse(n_, std::move(ent));
}

LatticeSequence LatticeSequence::scaled(double c) const {
    LatticeSequence out = *this;
    if (out.dense_) {
        for (double& v : out.dense_values_) v *= c;
    } else {
        for (auto& [idx, v] : out.sparse_) {
            (void)idx;
            v *= c;
        }
    }
    return out;
}

void LatticeSequence::support_snapshot(std::vector<LatticeIndex>& idx,
                                       std::vector<double>& val) const {
    idx.clear();
    val.clear();
    idx.reserve(nonzero_count());
    val.reserve(idx.capacity());
    for_each([&](const LatticeIndex& i, double v) {
        idx.push_back(i);
        val.push_back(v);
    });
}

double lp_norm(const LatticeSequence& b, double p) {
    if (!(p > 0.0)) throw invalid_parameter("lp_norm: p must be positive");
    if (std::isinf(p)) {
        double sup = 0.0;
        b.for_each([&](const LatticeIndex&, double v) { sup = std::max(sup, std::fabs(v)); });
        return sup;
    }
    double acc = 0.0;
    b.for_each([&](const LatticeIndex&, double v) { acc += std::pow(std::fabs(v), p); });
    return std::pow(acc, 1.0 / p);
}

double l1_norm(const LatticeSequence& b) {
    double acc = 0.0;
    b.for_each([&](const LatticeIndex&, double v) { acc += std::fabs(v); });
    return acc;
}

double linf_norm(const LatticeSequence& b) {
    return lp_norm(b, std::numeric_limits<double>::infinity());
}

LatticeSequence superpose(std::span<const LatticeSequence> seqs, std::span<const double> coeffs) {
    if (seqs.size() != coeffs.size())
        throw invalid_parameter("superpose: sequence/coefficient count mismatch");
    if (seqs.empty()) throw invalid_parameter("superpose: empty input");
    const int n = seqs[0].dim();
    for (const auto& s : seqs)
        if (s.dim() != n) throw invalid_parameter("superpose: dimension mismatch");
    std::map<LatticeIndex, double> acc;
    for (std::size_t k = 0; k < seqs.size(); ++k) {
        const double c = coeffs[k];
        seqs[k].for_each([&](const LatticeIndex& i, double v) { acc[i] += c * v; });
    }
    std::vector<std::pair<LatticeIndex, double>> ent;
    ent.reserve(acc.size());
    for (auto& [i, v] : acc)
        if (v != 0.0) ent.emplace_back(i, v);
    return LatticeSequence::sparse(n, std::move(ent)).canonical();
}

}  // namespace latfrac
