#include "latfrac/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "latfrac/rng.hpp"

namespace latfrac {

namespace {

mpz_class to_mpz(std::int64_t v) {
    mpz_class z;
    const bool neg = v < 0;
    std::uint64_t mag = neg ? (~static_cast<std::uint64_t>(v) + 1ull) : static_cast<std::uint64_t>(v);
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(mag), 0, 0, &mag);
    if (neg) z = -z;
    return z;
}

// Enumerate all multi-indices beta in N_0^n with [beta] <= degree.
void enumerate_multi_indices(int n, int degree, std::vector<std::vector<int>>& out) {
    std::vector<int> beta(static_cast<std::size_t>(n), 0);
    out.clear();
    while (true) {
        int total = 0;
        for (int v : beta) total += v;
        if (total <= degree) out.push_back(beta);
        int d = n - 1;
        for (; d >= 0; --d) {
            if (++beta[static_cast<std::size_t>(d)] <= degree) break;
            beta[static_cast<std::size_t>(d)] = 0;
        }
        if (d < 0) break;
    }
}

// Exact moment of an integer profile against i^beta (or (i - origin)^beta).
mpz_class profile_moment(const CubeWindow& Q, const std::vector<long long>& profile,
                         const std::vector<int>& beta, const LatticeIndex* origin) {
    const int n = Q.dim();
    mpz_class acc = 0;
    LatticeIndex i(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) i[static_cast<std::size_t>(d)] = Q.center[d] - Q.radius;
    const std::int64_t card = Q.cardinality();
    mpz_class mono, powz;
    for (std::int64_t off = 0; off < card; ++off) {
        const long long k = profile[static_cast<std::size_t>(off)];
        if (k != 0) {
            mono = 1;
            for (int d = 0; d < n; ++d) {
                const int e = beta[static_cast<std::size_t>(d)];
                if (e > 0) {
                    const std::int64_t base =
                        origin ? i[static_cast<std::size_t>(d)] - (*origin)[static_cast<std::size_t>(d)]
                               : i[static_cast<std::size_t>(d)];
                    mpz_pow_ui(powz.get_mpz_t(), to_mpz(base).get_mpz_t(), static_cast<unsigned>(e));
                    mono *= powz;
                }
            }
            acc += mono * to_mpz(k);
        }
        for (int d = n - 1; d >= 0; --d) {
            if (++i[static_cast<std::size_t>(d)] <= Q.center[d] + Q.radius) break;
            i[static_cast<std::size_t>(d)] = Q.center[d] - Q.radius;
        }
    }
    return acc;
}

}  // namespace

Atom make_atom_from_source(const CubeWindow& Q, double p, const std::vector<long long>& source) {
    const int n = Q.dim();
    const int degree = atom_degree(p, n);
    const std::int64_t side = Q.side();
    const std::int64_t src_len0 = side - (degree + 1);
    if (src_len0 < 1)
        throw cannot_construct("make_atom: cube too small along coordinate 0 for degree " +
                               std::to_string(degree));
    const std::int64_t card = Q.cardinality();
    const std::int64_t stride0 = card / side;  // coordinate-0 stride in row-major order
    if (static_cast<std::int64_t>(source.size()) != src_len0 * stride0)
        throw invalid_parameter("make_atom: source profile size mismatch");

    // Place the source at the low end of coordinate 0, then apply the
    // (degree+1)-fold backward difference along coordinate 0. Telescoping is
    // integer-exact, and each pass shifts the support up by one step, so the
    // result stays inside Q.
    std::vector<long long> profile(static_cast<std::size_t>(card), 0);
    for (std::int64_t x0 = 0; x0 < src_len0; ++x0)
        for (std::int64_t r = 0; r < stride0; ++r)
            profile[static_cast<std::size_t>(x0 * stride0 + r)] =
                source[static_cast<std::size_t>(x0 * stride0 + r)];
    for (int pass = 0; pass <= degree; ++pass)
        for (std::int64_t off = card - 1; off >= stride0; --off)
            profile[static_cast<std::size_t>(off)] -= profile[static_cast<std::size_t>(off - stride0)];

    long long max_abs = 0;
    for (long long v : profile) max_abs = std::max(max_abs, std::llabs(v));
    if (max_abs == 0) throw cannot_construct("make_atom: source profile differenced to zero");

    // Positive rational scale with |a|_inf equal to the double value of
    // (#Q)^{-1/p}; products scale * profile are exact rationals and the stored
    // doubles are their rounded image.
    const double sup_target = std::pow(static_cast<double>(card), -1.0 / p);
    mpq_class scale(sup_target);
    scale /= to_mpz(max_abs);
    scale.canonicalize();

    std::vector<double> vals(static_cast<std::size_t>(card), 0.0);
    for (std::int64_t off = 0; off < card; ++off) {
        if (profile[static_cast<std::size_t>(off)] != 0) {
            mpq_class exact = scale * to_mpz(profile[static_cast<std::size_t>(off)]);
            vals[static_cast<std::size_t>(off)] = exact.get_d();
        }
    }

    Atom a;
    a.seq = LatticeSequence::dense(Q, std::move(vals));
    a.cube = Q;
    a.p = p;
    a.degree = degree;
    a.profile = std::move(profile);
    a.scale = scale;
    return a;
}

Atom make_atom(const CubeWindow& Q, double p, std::uint64_t seed) {
    const int n = Q.dim();
    const int degree = atom_degree(p, n);
    const std::int64_t side = Q.side();
    const std::int64_t src_len0 = side - (degree + 1);
    if (src_len0 < 1)
        throw cannot_construct("make_atom: cube too small along coordinate 0 for degree " +
                               std::to_string(degree));
    const std::int64_t stride0 = Q.cardinality() / side;

    Rng rng = Rng::derive(seed, 0);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<long long> source(static_cast<std::size_t>(src_len0 * stride0));
        bool any = false;
        for (auto& v : source) {
            v = rng.uniform_int(-9, 9);
            if (v != 0) any = true;
        }
        if (!any) continue;  // redraw: difference of the zero profile is zero
        return make_atom_from_source(Q, p, source);
    }
    throw cannot_construct("make_atom: no nonzero profile drawn");
}

AtomValidation validate_atom(const Atom& a) {
    AtomValidation out;
    if (!a.has_certificate()) {
        out.issues.push_back("atom carries no exact certificate");
        return out;
    }
    const std::int64_t card = a.cube.cardinality();
    if (static_cast<std::int64_t>(a.profile.size()) != card ||
        !a.seq.is_dense() || !(a.seq.window() == a.cube)) {
        out.issues.push_back("certificate shape does not match the cube");
        return out;
    }
    if (!(a.scale > 0)) {
        out.issues.push_back("scale must be positive");
        return out;
    }

    // (a1) plus certificate integrity: stored doubles are the rounded exact values.
    out.support_ok = true;
    const auto vals = a.seq.values();
    for (std::int64_t off = 0; off < card; ++off) {
        mpq_class exact = a.scale * to_mpz(a.profile[static_cast<std::size_t>(off)]);
        if (vals[static_cast<std::size_t>(off)] != exact.get_d()) {
            out.support_ok = false;
            out.issues.push_back("stored values inconsistent with the certificate");
            break;
        }
    }

    // (a2): scale * max|profile| <= (#Q)^{-1/p}, within 1e-12 relative slack.
    long long max_abs = 0;
    for (long long v : a.profile) max_abs = std::max(max_abs, std::llabs(v));
    const double sup_target = std::pow(static_cast<double>(card), -1.0 / a.p);
    const double sup_actual = mpq_class(a.scale * to_mpz(max_abs)).get_d();
    out.sup_ok = sup_actual <= sup_target * (1.0 + 1e-12);
    if (!out.sup_ok)
        out.issues.push_back("sup norm exceeds (#Q)^(-1/p)");

    // (a3) exactly, against the uncentered monomials i^beta. Zero here is
    // equivalent to zero against any translate, since polynomials of total
    // degree <= d form a translation-invariant family.
    std::vector<std::vector<int>> betas;
    enumerate_multi_indices(a.cube.dim(), a.degree, betas);
    out.moments_ok = true;
    for (const auto& beta : betas) {
        if (profile_moment(a.cube, a.profile, beta, nullptr) != 0) {
            out.moments_ok = false;
            std::string b = "moment beta=(";
            for (int v : beta) b += std::to_string(v) + ",";
            out.issues.push_back(b + ") is nonzero");
        }
    }
    out.max_moment_abs = 0.0;
    return out;
}

AtomValidation validate_atom(const LatticeSequence& a, const CubeWindow& Q, double p) {
    AtomValidation out;
    const int n = Q.dim();
    if (a.dim() != n) {
        out.issues.push_back("dimension mismatch");
        return out;
    }
    const int degree = atom_degree(p, n);

    out.support_ok = true;
    a.for_each([&](const LatticeIndex& i, double) {
        if (!Q.contains(i)) out.support_ok = false;
    });
    if (!out.support_ok) out.issues.push_back("support not contained in the cube");

    const double sup = linf_norm(a);
    const double sup_target = std::pow(static_cast<double>(Q.cardinality()), -1.0 / p);
    out.sup_ok = sup <= sup_target * (1.0 + 1e-12);
    if (!out.sup_ok) out.issues.push_back("sup norm exceeds (#Q)^(-1/p)");

    // Moments against monomials centered at the cube center (equivalent to the
    // uncentered ones, and numerically stable for far-from-origin cubes).
    const double tol = 1e-10 * sup * static_cast<double>(Q.cardinality()) *
                       std::pow(static_cast<double>(std::max<std::int64_t>(Q.radius, 1)), degree);
    std::vector<std::vector<int>> betas;
    enumerate_multi_indices(n, degree, betas);
    out.moments_ok = true;
    for (const auto& beta : betas) {
        double moment = 0.0;
        a.for_each([&](const LatticeIndex& i, double v) {
            double mono = 1.0;
            for (int d = 0; d < n; ++d)
                for (int e = 0; e < beta[static_cast<std::size_t>(d)]; ++e)
                    mono *= static_cast<double>(i[static_cast<std::size_t>(d)] - Q.center[d]);
            moment += mono * v;
        });
        out.max_moment_abs = std::max(out.max_moment_abs, std::fabs(moment));
        if (std::fabs(moment) > tol) {
            out.moments_ok = false;
            std::string b = "moment beta=(";
            for (int v : beta) b += std::to_string(v) + ",";
            out.issues.push_back(b + ") = " + std::to_string(moment) + " exceeds tolerance");
        }
    }
    return out;
}

bool RegionGeometry::in_union_qstar(const LatticeIndex& j) const {
    for (const auto& q : qstar)
        if (q.contains(j)) return true;
    return false;
}

int RegionGeometry::region_of(const LatticeIndex& j) const {
    if (!in_R(j)) throw invalid_parameter("region_of: point lies in a dilated cube");
    const int m = static_cast<int>(inv_centers.size());
    int best = 0;
    mpq_class best_d2;
    for (int l = 0; l < m; ++l) {
        mpq_class d2 = 0;
        for (std::size_t d = 0; d < j.size(); ++d) {
            mpq_class delta = mpq_class(static_cast<long>(j[d])) - inv_centers[static_cast<std::size_t>(l)][d];
            d2 += delta * delta;
        }
        if (l == 0 || d2 < best_d2) {
            best_d2 = d2;
            best = l;
        }
    }
    return best;
}

RegionGeometry region_geometry(const CubeWindow& Q, const FractionalSpec& spec) {
    const ValidationReport rep = validate_spec(spec);
    if (!rep.valid()) throw invalid_parameter("region_geometry: invalid spec");
    if (Q.dim() != spec.n) throw invalid_parameter("region_geometry: dimension mismatch");

    RegionGeometry g;
    g.base = Q;
    g.d_inv = spec_inv_norm_bound(spec);
    const std::int64_t radius =
        static_cast<std::int64_t>(std::ceil(4.0 * g.d_inv * static_cast<double>(Q.radius))) + 1;

    for (const auto& A : spec.matrices) {
        const auto center_exact = A.exact_inverse().apply(Q.center);
        // Componentwise nearest lattice point, ties toward -inf: ceil(q - 1/2).
        LatticeIndex rounded(static_cast<std::size_t>(spec.n));
        for (int d = 0; d < spec.n; ++d) {
            mpq_class shifted = center_exact[static_cast<std::size_t>(d)] - mpq_class(1, 2);
            mpz_class r;
            mpz_cdiv_q(r.get_mpz_t(), shifted.get_num().get_mpz_t(), shifted.get_den().get_mpz_t());
            rounded[static_cast<std::size_t>(d)] = static_cast<std::int64_t>(r.get_si());
        }
        g.qstar.push_back(CubeWindow{std::move(rounded), radius});
        g.inv_centers.push_back(center_exact);
    }
    return g;
}

std::vector<DominationRecord> domination_check(const FractionalSpec& spec, const Atom& a,
                                               std::span<const LatticeIndex> samples) {
    const ValidationReport rep = validate_spec(spec);
    if (!rep.valid()) throw invalid_parameter("domination_check: invalid spec");
    const int n = spec.n;
    if (a.cube.dim() != n) throw invalid_parameter("domination_check: dimension mismatch");

    const RegionGeometry geom = region_geometry(a.cube, spec);
    const double anorm = linf_norm(a.seq);
    const double alpha_shifted = spec.alpha * n / static_cast<double>(n + a.degree + 1);
    const double exponent = static_cast<double>(n + a.degree + 1) / n;
    const LatticeSequence indicator = LatticeSequence::dense(
        a.cube, std::vector<double>(static_cast<std::size_t>(a.cube.cardinality()), 1.0));

    std::vector<DominationRecord> records;
    records.reserve(samples.size());
    for (const auto& j : samples) {
        if (!geom.in_R(j))
            throw invalid_parameter("domination_check: sample point not in R");
        const int l = geom.region_of(j);
        const LatticeIndex image = spec.matrices[static_cast<std::size_t>(l)].apply(j);
        const double mval = maximal_at(indicator, alpha_shifted, image);
        const double rhs = anorm * std::pow(mval, exponent);
        const double lhs = std::fabs(apply_T_at(spec, a.seq, j));
        records.push_back({j, l, lhs, rhs, lhs / rhs});
    }
    return records;
}

Synthesis atomic_synthesis(const std::vector<Atom>& atoms, const std::vector<double>& lambda) {
    if (atoms.size() != lambda.size())
        throw invalid_parameter("atomic_synthesis: atom/coefficient count mismatch");
    if (atoms.empty()) throw invalid_parameter("atomic_synthesis: empty input");
    const int n = atoms[0].seq.dim();
    for (const auto& a : atoms)
        if (a.seq.dim() != n) throw invalid_parameter("atomic_synthesis: dimension mismatch");

    std::vector<LatticeSequence> seqs;
    seqs.reserve(atoms.size());
    for (const auto& a : atoms) seqs.push_back(a.seq);
    Synthesis out;
    out.sum = superpose(seqs, lambda);
    out.lambda_p_mass = 0.0;
    for (double l : lambda) out.lambda_p_mass += std::pow(std::fabs(l), atoms[0].p);
    return out;
}

}  // namespace latfrac
