#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "latfrac/fracspec.hpp"
#include "latfrac/operators.hpp"
#include "latfrac/sequence.hpp"

namespace latfrac {

// A sequence supported in a discrete cube Q with |a|_inf <= (#Q)^{-1/p} and
// vanishing moments sum_i i^beta a(i) = 0 for all multi-indices [beta] <= degree.
//
// Atoms built by make_atom carry an exact certificate: an integer profile on Q
// and a positive rational scale with a(i) = scale * profile(i) (the stored
// doubles are the rounded image). Moment checks on the certificate are exact.
struct Atom {
    LatticeSequence seq;  // dense on cube
    CubeWindow cube;
    double p = 1.0;
    int degree = 0;
    std::vector<long long> profile;  // row-major over cube; empty if unknown
    mpq_class scale = 0;

    bool has_certificate() const { return !profile.empty(); }
};

// Draws an integer profile on the cube shrunk by degree+1 along coordinate 0,
// applies the (degree+1)-fold backward difference in coordinate 0 (which
// cancels all moments up to total degree `degree` with integer-exact
// telescoping), and rescales so |a|_inf equals (#Q)^{-1/p}.
Atom make_atom(const CubeWindow& Q, double p, std::uint64_t seed);

// Same construction from a caller-supplied source profile, given in row-major
// order over the shrunk cube (coordinate-0 extent reduced by degree+1).
Atom make_atom_from_source(const CubeWindow& Q, double p, const std::vector<long long>& source);

struct AtomValidation {
    bool support_ok = false;
    bool sup_ok = false;
    bool moments_ok = false;
    double max_moment_abs = 0.0;  // worst moment magnitude seen (0 for exact path)
    std::vector<std::string> issues;
    bool valid() const { return support_ok && sup_ok && moments_ok; }
};

// Exact path: moment sums evaluated on the integer profile (arbitrary
// precision); requires a certificate.
AtomValidation validate_atom(const Atom& a);

// Floating path for plain sequences: support exactly, sup-norm within 1e-12
// relative slack, moments within 1e-10 |a|_inf #Q max(radius,1)^degree,
// evaluated against monomials centered at the cube center.
AtomValidation validate_atom(const LatticeSequence& a, const CubeWindow& Q, double p);

// Dilated image cubes of Q under the inverse matrices, their complement R and
// its nearest-center partition R_1..R_m (ties to the smallest index).
struct RegionGeometry {
    CubeWindow base;
    std::vector<CubeWindow> qstar;                 // around rounded A_k^{-1} i0
    std::vector<std::vector<mpq_class>> inv_centers;  // exact A_k^{-1} i0
    double d_inv = 1.0;                            // D bound used for the dilation

    bool in_union_qstar(const LatticeIndex& j) const;
    bool in_R(const LatticeIndex& j) const { return !in_union_qstar(j); }
    // 0-based l with |j - A_l^{-1} i0| minimal (exact rational comparison);
    // requires j in R.
    int region_of(const LatticeIndex& j) const;
};
RegionGeometry region_geometry(const CubeWindow& Q, const FractionalSpec& spec);

struct DominationRecord {
    LatticeIndex j;
    int region;   // l with j in R_l
    double lhs;   // |T a (j)|
    double rhs;   // |a|_inf (M_{alpha n/(n+d+1)}(chi_Q)(A_l j))^{(n+d+1)/n}
    double ratio;
};

// Pointwise comparison of |T a| against its maximal-function majorant on R.
// Every sample must lie in R.
std::vector<DominationRecord> domination_check(const FractionalSpec& spec, const Atom& a,
                                               std::span<const LatticeIndex> samples);

struct Synthesis {
    LatticeSequence sum;     // sum_k lambda_k a_k
    double lambda_p_mass;    // sum_k |lambda_k|^p (p of the first atom)
};
Synthesis atomic_synthesis(const std::vector<Atom>& atoms, const std::vector<double>& lambda);

}  // namespace latfrac
