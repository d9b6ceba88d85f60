#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "latfrac/experiments.hpp"
#include "latfrac/operators.hpp"
#include "latfrac/rng.hpp"

using namespace latfrac;

namespace {

const double kPiSq3 = M_PI * M_PI / 3.0;

FractionalSpec sym_1d() {
    FractionalSpec s;
    s.n = 1;
    s.alpha = 0.0;
    s.exponents = {0.5, 0.5};
    s.matrices = {IntegerMatrix(1, {1}), IntegerMatrix(1, {-1})};
    return s;
}

LatticeSequence random_sparse(Rng& rng, int n, std::int64_t box, int count) {
    std::vector<std::pair<LatticeIndex, double>> entries;
    for (int k = 0; k < count; ++k) {
        LatticeIndex i(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) i[static_cast<std::size_t>(d)] = rng.uniform_int(-box, box);
        entries.emplace_back(std::move(i), rng.uniform_pm1());
    }
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end(),
                              [](const auto& a, const auto& b) { return a.first == b.first; }),
                  entries.end());
    return LatticeSequence::sparse(n, std::move(entries));
}

double rel_diff(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / scale;
}

}  // namespace

TEST_CASE("apply_T point examples") {
    const auto spec = sym_1d();
    const auto b = LatticeSequence::delta({1});
    CHECK(apply_T_at(spec, b, {2}) ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    // i = 1 equals A1 j for j = 1, hence the only support point is excluded.
    CHECK(apply_T_at(spec, b, {1}) == 0.0);

    FractionalSpec riesz2 = FractionalSpec::riesz(2, 1.0);
    CHECK(apply_T_at(riesz2, LatticeSequence::delta({0, 0}), {3, 4}) ==
          doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("apply_T rejects invalid parameter sets") {
    FractionalSpec bad = sym_1d();
    bad.exponents = {0.5, 0.6};
    CHECK_THROWS_AS(apply_T_at(bad, LatticeSequence::delta({0}), {1}), invalid_parameter);
}

TEST_CASE("riesz examples") {
    const auto d0 = LatticeSequence::delta({0, 0});
    CHECK(riesz_at(d0, 1.0, {3, 4}) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(riesz_at(d0, 1.0, {0, 0}) == 0.0);

    const auto two = LatticeSequence::sparse(1, {{{0}, 1.0}, {{1}, 1.0}});
    const double expected = std::pow(3.0, -0.5) + std::pow(2.0, -0.5);
    CHECK(riesz_at(two, 0.5, {3}) == doctest::Approx(expected).epsilon(1e-14));

    CHECK_THROWS_AS(riesz_at(d0, 2.5, {1, 1}), invalid_parameter);
}

TEST_CASE("riesz reduction equals apply_T with the identity matrix") {
    Rng rng(31);
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(1, 3));
        const double alpha = 0.1 + 0.8 * rng.uniform() * n;
        if (!(alpha < n)) continue;
        const auto b = random_sparse(rng, n, 12, static_cast<int>(rng.uniform_int(1, 10)));
        LatticeIndex j(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) j[static_cast<std::size_t>(d)] = rng.uniform_int(-15, 15);
        const double via_T = apply_T_at(FractionalSpec::riesz(n, alpha), b, j);
        const double direct = riesz_at(b, alpha, j);
        CHECK(rel_diff(via_T, direct) <= 1e-12);
        ++checked;
    }
    CHECK(checked > 400);
}

TEST_CASE("composition domination by shifted riesz potentials") {
    // |T b (j)| <= sum_k (I_alpha |b|)(A_k j) for alpha > 0.
    Rng rng(47);
    FractionalSpec spec;
    spec.n = 2;
    spec.alpha = 0.7;
    spec.exponents = {0.65, 0.65};
    spec.matrices = {IntegerMatrix(2, {1, 0, 0, 1}), IntegerMatrix(2, {0, 1, -1, 0})};
    REQUIRE(validate_spec(spec).valid());

    for (int trial = 0; trial < 40; ++trial) {
        const auto b = random_sparse(rng, 2, 8, 12);
        LatticeSequence babs = b;
        std::vector<std::pair<LatticeIndex, double>> abs_entries;
        b.for_each([&](const LatticeIndex& i, double v) { abs_entries.emplace_back(i, std::fabs(v)); });
        const auto babs2 = LatticeSequence::sparse(2, abs_entries);
        LatticeIndex j{rng.uniform_int(-10, 10), rng.uniform_int(-10, 10)};
        const double lhs = std::fabs(apply_T_at(spec, b, j));
        double rhs = 0.0;
        for (const auto& A : spec.matrices) rhs += riesz_at(babs2, spec.alpha, A.apply(j));
        CHECK(lhs <= rhs * (1 + 1e-12));
    }
}

TEST_CASE("fractional maximal closed forms") {
    const auto d0 = LatticeSequence::delta({0, 0});
    CHECK(maximal_at(d0, 0.0, {2, 1}) == doctest::Approx(0.04).epsilon(1e-13));
    CHECK(maximal_at(d0, 1.0, {2, 1}) == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(maximal_at(d0, 0.7, {0, 0}) == doctest::Approx(1.0).epsilon(1e-15));

    // Window evaluation agrees with the single-point path.
    const CubeWindow out{{0, 0}, 3};
    const auto ref = fractional_maximal(d0, 0.0, out);
    for (std::int64_t off = 0; off < out.cardinality(); ++off) {
        const auto j = out.index_at(off);
        CHECK(rel_diff(ref.at(j), maximal_at(d0, 0.0, j)) <= 1e-12);
    }
}

TEST_CASE("maximal fast path equals the reference on random dense windows") {
    Rng rng(55);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(1, 3));
        const std::int64_t radius = rng.uniform_int(1, n == 1 ? 12 : (n == 2 ? 7 : 4));
        CubeWindow w{LatticeIndex(static_cast<std::size_t>(n), 0), radius};
        for (int d = 0; d < n; ++d) w.center[static_cast<std::size_t>(d)] = rng.uniform_int(-4, 4);
        std::vector<double> vals(static_cast<std::size_t>(w.cardinality()));
        for (auto& v : vals) {
            const double mag = 0.1 + 0.9 * rng.uniform();
            v = (rng.next_u64() & 1ull) ? mag : -mag;
        }
        const auto b = LatticeSequence::dense(w, vals);
        const double alpha = rng.uniform() * 0.9 * n;
        CubeWindow out = w;
        out.radius += rng.uniform_int(0, 3);
        const auto slow = fractional_maximal(b, alpha, out);
        const auto fast = fractional_maximal_fast(b, alpha, out);
        for (std::int64_t off = 0; off < out.cardinality(); ++off)
            CHECK(rel_diff(slow.values()[static_cast<std::size_t>(off)],
                           fast.values()[static_cast<std::size_t>(off)]) <= 1e-12);
    }

    // Degenerate inputs.
    const auto zero = LatticeSequence::zeros(CubeWindow{{0}, 4});
    const auto out_z = fractional_maximal_fast(zero, 0.3, CubeWindow{{0}, 6});
    for (double v : out_z.values()) CHECK(v == 0.0);
}

TEST_CASE("fractional maximal is sublinear") {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const auto b1 = random_sparse(rng, 1, 10, 6);
        const auto b2 = random_sparse(rng, 1, 10, 6);
        std::vector<LatticeSequence> seqs{b1, b2};
        std::vector<double> coeffs{1.0, 1.0};
        const auto sum = superpose(seqs, coeffs);
        for (std::int64_t j = -12; j <= 12; ++j) {
            const double lhs = maximal_at(sum, 0.4, {j});
            const double rhs = maximal_at(b1, 0.4, {j}) + maximal_at(b2, 0.4, {j});
            CHECK(lhs <= rhs * (1 + 1e-12));
        }
    }
}

TEST_CASE("tail sum closed forms") {
    // 2 zeta(2) and its shifted variant give independent oracles.
    CHECK(std::fabs(tail_sum(1, 1.0, 1, 1e-7) - kPiSq3) < 1e-6);
    CHECK(std::fabs(tail_sum(1, 1.0, 2, 1e-7) - (kPiSq3 - 2.0)) < 1e-6);
    CHECK(tail_sum(1, 1.0, 4, 1e-5) < tail_sum(1, 1.0, 2, 1e-5));
    CHECK_THROWS_AS(tail_sum(3, 0.01, 1, 1e-9), budget_exceeded);
    CHECK_THROWS_AS(tail_sum(1, -1.0, 1, 1e-6), invalid_parameter);
    CHECK_THROWS_AS(tail_sum(1, 1.0, 0, 1e-6), invalid_parameter);
}

TEST_CASE("closed form tail bound") {
    CHECK(closed_form_tail_bound(1, 1.0, 1).bound == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(closed_form_tail_bound(1, 1.0, 2).bound == doctest::Approx(4.0).epsilon(1e-15));
    // Independent hand evaluation: 2 * 1^3 * (2 + 2^2 * 1/2) * 1 = 8.
    CHECK(closed_form_tail_bound(1, 2.0, 1).bound == doctest::Approx(8.0).epsilon(1e-15));

    for (int n : {1, 2, 3})
        for (double eps : {0.5, 1.0, 2.0})
            for (std::int64_t N : {1, 2, 4}) {
                const double precision =
                    std::max(tail_sum_feasible_precision(n, eps, 4e6),
                             1e-4 * closed_form_tail_bound(n, eps, N).bound);
                CHECK(tail_sum(n, eps, N, precision) <=
                      closed_form_tail_bound(n, eps, N).bound * (1 + 1e-9));
            }
}

TEST_CASE("truncated lq norm against the closed-form series") {
    // T delta_0 for the 1-d kernel exponent 1/2 has |T d0 (j)| = |j|^{-1/2};
    // the 4th-power mass over j != 0 is 2 zeta(2) = pi^2/3.
    const auto spec = FractionalSpec::riesz(1, 0.5);
    const auto d0 = LatticeSequence::delta({0});
    const auto geom = support_geometry(d0);
    const CubeWindow out{{0}, 10000};
    const auto res = apply_T(spec, d0, out);
    const auto tn = truncated_lq_norm(res, 4.0, geom.l1, spec, geom);
    CHECK(!tn.divergent);
    const double window_mass = std::pow(tn.norm, 4.0);
    const double tail_mass = std::pow(tn.tail, 4.0);
    CHECK(window_mass <= kPiSq3 * 1.0001);
    CHECK(window_mass + tail_mass >= kPiSq3 * 0.9999);
    CHECK(std::fabs(window_mass + tail_mass - kPiSq3) <= 0.01 * kPiSq3);
}

TEST_CASE("truncated lq norm window self-consistency") {
    Rng rng(13);
    const auto spec = FractionalSpec::riesz(1, 0.25);
    const auto b = random_sparse(rng, 1, 6, 8);
    const auto geom = support_geometry(b);
    const double q = 8.0;  // large q: negligible tail mass
    const auto small = apply_T(spec, b, CubeWindow{{0}, 2000});
    const auto big = apply_T(spec, b, CubeWindow{{0}, 20000});
    const auto tn_small = truncated_lq_norm(small, q, geom.l1, spec, geom);
    const auto tn_big = truncated_lq_norm(big, q, geom.l1, spec, geom);
    // The certified outside mass is tiny, so growing the window ten-fold moves
    // the reported norm by less than 1e-9.
    CHECK(std::pow(tn_small.tail, q) < 1e-9);
    CHECK(std::fabs(tn_small.norm - tn_big.norm) <= 1e-9);
    CHECK(tn_big.norm >= tn_small.norm);     // window growth only adds mass
    CHECK(tn_big.tail <= tn_small.tail);
    // The certificate brackets the bigger-window norm.
    CHECK(tn_big.norm <= std::pow(std::pow(tn_small.norm, q) + std::pow(tn_small.tail, q), 1.0 / q) *
                             (1 + 1e-12));
}

TEST_CASE("truncated lq norm flags the divergent exponent range") {
    const auto spec = FractionalSpec::riesz(1, 0.5);
    const auto d0 = LatticeSequence::delta({0}, 2.0);
    const auto geom = support_geometry(d0);
    const auto res = apply_T(spec, d0, CubeWindow{{0}, 64});
    // (n - alpha) q <= n here: q = 2, (1 - 0.5) * 2 = 1 = n.
    const auto tn = truncated_lq_norm(res, 2.0, geom.l1, spec, geom);
    CHECK(tn.divergent);
}

TEST_CASE("region decomposition geometry and completeness") {
    const auto spec = sym_1d();
    Rng rng(17);

    // d = 2 for A = +-1: I_k = {i : 0 < |i -+ j0| <= |j0|}.
    const auto dec_probe = region_decompose_alpha0(spec, LatticeSequence::delta({3}), {2}, 2.0);
    CHECK(dec_probe.d_sep == doctest::Approx(2.0).epsilon(1e-12));
    // i = 3 lies in I1 = {i : 0 < |i - 2| <= 2}: the whole mass lands there.
    CHECK(dec_probe.part_abs[0] > 0.0);
    CHECK(dec_probe.part_abs[1] == 0.0);
    CHECK(dec_probe.part_abs[2] == 0.0);
    CHECK(dec_probe.part_abs[3] == 0.0);

    for (int trial = 0; trial < 60; ++trial) {
        const auto b = random_sparse(rng, 1, 30, 12);
        LatticeIndex j0{rng.uniform_int(1, 20) * (rng.next_u64() & 1ull ? 1 : -1)};
        const auto dec = region_decompose_alpha0(spec, b, j0, 2.0);
        // Disjoint cover: signed partial sums add to the full signed sum.
        const double total = dec.part_signed[0] + dec.part_signed[1] + dec.part_signed[2] +
                             dec.part_signed[3];
        CHECK(rel_diff(total, dec.total) <= 1e-12);
        // Explicit majorants hold.
        CHECK(dec.part_abs[0] <= dec.majorant_i1 * (1 + 1e-9));
        CHECK(dec.part_abs[1] <= dec.majorant_i2 * (1 + 1e-9));
        CHECK(dec.part_abs[2] <= dec.majorant_i3 * (1 + 1e-9));
    }

    // Support far outside the middle ball lands in I4 alone.
    const auto far = LatticeSequence::delta({1000});
    const auto dec_far = region_decompose_alpha0(spec, far, {2}, 2.0);
    CHECK(dec_far.part_abs[0] == 0.0);
    CHECK(dec_far.part_abs[1] == 0.0);
    CHECK(dec_far.part_abs[2] == 0.0);
    CHECK(dec_far.part_abs[3] > 0.0);

    CHECK_THROWS_AS(region_decompose_alpha0(spec, far, {0}, 2.0), invalid_parameter);
    CHECK_THROWS_AS(region_decompose_alpha0(FractionalSpec::riesz(1, 0.5), far, {2}, 2.0),
                    invalid_parameter);
}

TEST_CASE("region decomposition with an asymmetric pair populates the middle region") {
    // A = (1, 2): the near-regions no longer tile the middle ball, so the
    // middle-region majorant is exercised with nonzero partial sums.
    FractionalSpec spec;
    spec.n = 1;
    spec.alpha = 0.0;
    spec.exponents = {0.5, 0.5};
    spec.matrices = {IntegerMatrix(1, {1}), IntegerMatrix(1, {2})};
    REQUIRE(validate_spec(spec).valid());

    Rng rng(23);
    int middle_nonzero = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto b = random_sparse(rng, 1, 40, 16);
        LatticeIndex j0{rng.uniform_int(1, 16) * (rng.next_u64() & 1ull ? 1 : -1)};
        const auto dec = region_decompose_alpha0(spec, b, j0, 2.0);
        const double total = dec.part_signed[0] + dec.part_signed[1] + dec.part_signed[2] +
                             dec.part_signed[3];
        CHECK(rel_diff(total, dec.total) <= 1e-12);
        CHECK(dec.part_abs[0] <= dec.majorant_i1 * (1 + 1e-9));
        CHECK(dec.part_abs[1] <= dec.majorant_i2 * (1 + 1e-9));
        CHECK(dec.part_abs[2] <= dec.majorant_i3 * (1 + 1e-9));
        if (dec.part_abs[2] > 0.0) ++middle_nonzero;
    }
    CHECK(middle_nonzero > 20);
}

TEST_CASE("region decomposition far-field constant is stable under doubling") {
    const auto spec = sym_1d();
    Rng rng(19);
    // Wide support so I4 stays populated across the j0 range.
    CubeWindow w{{0}, 64};
    std::vector<double> vals(static_cast<std::size_t>(w.cardinality()));
    for (auto& v : vals) v = rng.uniform_pm1();
    const auto b = LatticeSequence::dense(w, vals);

    double prev = -1.0;
    for (std::int64_t j0 : {1, 2, 4, 8, 16}) {
        double worst = 0.0;
        for (std::int64_t sign = -1; sign <= 1; sign += 2) {
            const auto dec = region_decompose_alpha0(spec, b, {sign * j0}, 2.0);
            if (dec.i4_reference > 0.0) worst = std::max(worst, dec.part_abs[3] / dec.i4_reference);
        }
        CHECK(std::isfinite(worst));
        CHECK(worst > 0.0);
        if (prev > 0.0) {
            CHECK(worst <= prev * 2.0);
            CHECK(worst >= prev / 2.0);
        }
        prev = worst;
    }
}

TEST_CASE("default output window covers the dilated support images") {
    const auto spec = sym_1d();
    const auto b = LatticeSequence::sparse(1, {{{-3}, 1.0}, {{7}, -2.0}});
    const auto w = default_output_window(spec, b);
    CHECK(w.radius >= 4 * 7 + 16);
    CHECK(w.center == LatticeIndex{0});
}
