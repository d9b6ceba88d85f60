#include "latfrac/core.hpp"

#include <cmath>
#include <cstdlib>

namespace latfrac {

std::int64_t squared_norm(const LatticeIndex& j) {
    std::int64_t s = 0;
    for (auto c : j) s += c * c;
    return s;
}

double euclidean_norm(const LatticeIndex& j) {
    return std::sqrt(static_cast<double>(squared_norm(j)));
}

std::int64_t sup_norm(const LatticeIndex& j) {
    std::int64_t s = 0;
    for (auto c : j) {
        const std::int64_t a = c < 0 ? -c : c;
        if (a > s) s = a;
    }
    return s;
}

IndexNorms norms_of_index(const LatticeIndex& j) {
    return {euclidean_norm(j), sup_norm(j)};
}

std::int64_t CubeWindow::cardinality() const {
    if (radius < 0) throw invalid_parameter("CubeWindow: negative radius");
    const std::int64_t s = side();
    __int128 card = 1;
    for (int d = 0; d < dim(); ++d) {
        card *= s;
        if (card > static_cast<__int128>(4e18))
            throw invalid_parameter("CubeWindow: cardinality overflows 64 bits");
    }
    return static_cast<std::int64_t>(card);
}

bool CubeWindow::contains(const LatticeIndex& i) const {
    for (int d = 0; d < dim(); ++d) {
        const std::int64_t delta = i[d] - center[d];
        if (delta > radius || delta < -radius) return false;
    }
    return true;
}

std::int64_t CubeWindow::offset_of(const LatticeIndex& i) const {
    std::int64_t off = 0;
    const std::int64_t s = side();
    for (int d = 0; d < dim(); ++d) off = off * s + (i[d] - (center[d] - radius));
    return off;
}

LatticeIndex CubeWindow::index_at(std::int64_t offset) const {
    LatticeIndex out(center.size());
    index_at_into(offset, out);
    return out;
}

void CubeWindow::index_at_into(std::int64_t offset, LatticeIndex& out) const {
    const int n = dim();
    out.resize(static_cast<std::size_t>(n));
    const std::int64_t s = side();
    for (int d = n - 1; d >= 0; --d) {
        out[d] = center[d] - radius + offset % s;
        offset /= s;
    }
}

}  // namespace latfrac
