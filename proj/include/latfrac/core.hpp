#pragma once

#include <cstdint>
#include <vector>

#include "latfrac/errors.hpp"

namespace latfrac {

// A lattice point of Z^n.
using LatticeIndex = std::vector<std::int64_t>;

std::int64_t squared_norm(const LatticeIndex& j);  // sum of squares, exact
double euclidean_norm(const LatticeIndex& j);
std::int64_t sup_norm(const LatticeIndex& j);      // max |j_d|

struct IndexNorms {
    double euclidean;
    std::int64_t sup;
};
IndexNorms norms_of_index(const LatticeIndex& j);

// Discrete cube {i : |i - center|_inf <= radius}, radius >= 0.
// Row-major enumeration order: the last coordinate varies fastest.
struct CubeWindow {
    LatticeIndex center;
    std::int64_t radius = 0;

    int dim() const { return static_cast<int>(center.size()); }
    std::int64_t side() const { return 2 * radius + 1; }
    std::int64_t cardinality() const;  // (2N+1)^n, overflow-checked

    bool contains(const LatticeIndex& i) const;
    std::int64_t offset_of(const LatticeIndex& i) const;
    LatticeIndex index_at(std::int64_t offset) const;
    void index_at_into(std::int64_t offset, LatticeIndex& out) const;

    bool operator==(const CubeWindow&) const = default;
};

}  // namespace latfrac
