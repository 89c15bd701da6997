#include <gtest/gtest.h>

#include "portphase/harness.hpp"
#include "portphase/network.hpp"

using namespace portphase;

namespace {

const cplx j(0.0, 1.0);

RationalMatrix scalar(Poly num, Poly den) {
    RationalMatrix Z(1);
    Z.at(0, 0) = make_rational(std::move(num), std::move(den));
    return Z;
}

}  // namespace

TEST(Poly, Arithmetic) {
    EXPECT_EQ(poly_trim({1, 2, 0, 0}), (Poly{1, 2}));
    EXPECT_EQ(poly_mul({1, 1}, {-1, 1}), (Poly{-1, 0, 1}));
    EXPECT_EQ(poly_degree({0.0}), -1);
    EXPECT_EQ(poly_degree({3, 0, 2}), 2);
    EXPECT_NEAR(std::abs(poly_eval({1, 0, 1}, j)), 0.0, 1e-15);
    auto r = poly_roots({4, 0, 1});
    ASSERT_EQ(r.size(), 2u);
    for (cplx z : r) EXPECT_NEAR(std::abs(z), 2.0, 1e-12);
}

TEST(Rational, CommonDenominatorKeptForEqualDenominators) {
    RationalFunction a = make_rational({1}, {1, 1}), b = make_rational({2}, {1, 1});
    RationalFunction c = a + b;
    EXPECT_EQ(c.den, (Poly{1, 1}));
    EXPECT_EQ(c.num, (Poly{3}));
}

TEST(Eval, Examples) {
    CMatrix R = CMatrix::Constant(1, 1, 4.0);
    RationalMatrix Z = constant_network(R);
    EXPECT_LT((eval(Z, cplx(0.3, 7.0)) - R).norm(), 1e-15);
    EXPECT_NEAR(std::abs(eval(scalar({1}, {0, 1}), j)(0, 0) - (-j)), 0.0, 1e-15);
}

TEST(Eval, Fig4AtJ) {
    // Hand substitution: 1/(1+j) [[j, j], [0, (1+j)/(2j) + j + 1]].
    CMatrix Zj = eval(fig4_network(1, 1, 2, 1), j);
    CMatrix expect(2, 2);
    expect << cplx(0.5, 0.5), cplx(0.5, 0.5), 0.0, cplx(1.0, -0.5);
    EXPECT_LT((Zj - expect).norm(), 1e-14);
}

TEST(Eval, PoleHit) {
    try {
        eval(scalar({1}, {0, 1}), 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PoleHit);
    }
}

TEST(Fixtures, Fig4GammaZero) {
    RationalMatrix Z = fig4_network(1, 1, 2, 0);
    for (cplx s : {cplx(0.0, 0.7), cplx(0.2, 3.0)}) {
        CMatrix expect(2, 2);
        expect << s, s, s, 1.0 / (2.0 * s) + s + 1.0;
        EXPECT_LT((eval(Z, s) - expect).norm(), 1e-13);
    }
}

TEST(Fixtures, Fig14Entry11) {
    RationalMatrix Z = fig14_network(10, 0.2, 1, 0.1, 0.5);
    cplx s(0.0, 2.5);
    EXPECT_NEAR(std::abs(eval(Z, s)(0, 0) - (1.0 + 10.0 * s) / s), 0.0, 1e-13);
}

TEST(Fixtures, Fig13) {
    ResistiveFixture f = fig13_resistive(1, 1, 1, 1);
    CMatrix expect(2, 2);
    expect << 0.75, 0.25, 0.25, 0.75;
    EXPECT_LT((f.Za - expect).norm(), 1e-15);
    EXPECT_DOUBLE_EQ(f.RN, -0.75);
}

TEST(Poles, Examples) {
    EXPECT_EQ(imaginary_axis_poles(scalar({1}, {0, 1})), (std::vector<double>{0.0}));
    auto p = imaginary_axis_poles(scalar({0, 1}, {4, 0, 1}));
    ASSERT_EQ(p.size(), 1u);
    EXPECT_NEAR(p[0], 2.0, 1e-12);
    EXPECT_TRUE(imaginary_axis_poles(scalar({1, 1}, {1})).empty());
    // Only the capacitor pole at the origin; none inside [0.01, 1000].
    EXPECT_EQ(imaginary_axis_poles(fig4_network(1, 1, 2, 1)), (std::vector<double>{0.0}));
    FrequencyGrid g = build_grid(fig4_network(1, 1, 2, 1), 1e-2, 1e3, 100);
    EXPECT_EQ(std::count(g.detour.begin(), g.detour.end(), 1), 0);
}

TEST(Grid, PlainCount) {
    FrequencyGrid g = build_grid(constant_network(CMatrix::Identity(1, 1)), 0.1, 10, 10);
    EXPECT_EQ(g.size(), 21u);
    for (cplx s : g.points) EXPECT_EQ(s.real(), 0.0);
    EXPECT_DOUBLE_EQ(g.omega.front(), 0.1);
    EXPECT_DOUBLE_EQ(g.omega.back(), 10.0);
}

TEST(Grid, OriginDetour) {
    FrequencyGrid g = build_grid(scalar({1}, {0, 1}), 0.0, 10, 10);
    int detours = 0;
    for (size_t k = 0; k < g.size(); ++k)
        if (g.detour[k]) {
            ++detours;
            EXPECT_NEAR(std::abs(g.points[k]), 1e-6, 1e-12);
            EXPECT_GE(g.points[k].real(), -1e-18);
        }
    EXPECT_EQ(detours, kDetourSamples);
}

TEST(Grid, InteriorPoleDetour) {
    FrequencyGrid g = build_grid(scalar({0, 1}, {4, 0, 1}), 1, 10, 50);
    int detours = 0;
    for (size_t k = 0; k < g.size(); ++k) {
        EXPECT_GT(std::abs(g.points[k] - cplx(0, 2)), 0.0);
        if (g.detour[k]) {
            ++detours;
            EXPECT_NEAR(std::abs(g.points[k] - cplx(0, 2)), 2e-6, 1e-12);
            EXPECT_GT(g.points[k].real(), 0.0);  // right half plane
        }
    }
    EXPECT_EQ(detours, kDetourSamples);
    EXPECT_TRUE(std::is_sorted(g.omega.begin(), g.omega.end()));
}

TEST(Grid, InvalidRange) {
    RationalMatrix Z = constant_network(CMatrix::Identity(1, 1));
    for (auto [lo, hi, ppd] : {std::tuple{1.0, 1.0, 10.0}, std::tuple{-1.0, 1.0, 10.0}, std::tuple{0.1, 1.0, 0.0}}) {
        try {
            build_grid(Z, lo, hi, ppd);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidRange);
        }
    }
}

TEST(Sweep, ResistorIsFlat) {
    RationalMatrix Z = constant_network(CMatrix::Constant(1, 1, 3.0));
    SweepResult r = sweep(Z, build_grid(Z, 1e-2, 1e3, 20));
    for (const SweepPoint& p : r.points) {
        ASSERT_TRUE(p.has_phase);
        EXPECT_NEAR(p.lo, 0.0, 1e-12);
        EXPECT_NEAR(p.hi, 0.0, 1e-12);
    }
}

TEST(Sweep, PassiveFig4) {
    RationalMatrix Z = fig4_network(1, 1, 2, 0);
    SweepResult r = sweep(Z, build_grid(Z, 1e-2, 1e3, 100));
    ASSERT_TRUE(r.bounds);
    EXPECT_EQ(r.nonsectorial, 0);
    EXPECT_GE(r.bounds->lo, -kPi / 2 - 1e-6);
    EXPECT_LE(r.bounds->hi, kPi / 2 + 1e-6);
}

TEST(Sweep, Fig4GammaOneBands) {
    RationalMatrix Z = fig4_network(1, 1, 2, 1);
    SweepResult r = sweep(Z, build_grid(Z, 1e-2, 1e3, 100));
    auto lo = r.band(1e-2, 10), hi = r.band(10, 1e3, false, true);
    ASSERT_TRUE(lo && hi);
    EXPECT_GE(lo->lo, -kPi / 2 - 1e-3);
    EXPECT_LE(lo->hi, kPi / 2 + 1e-3);
    EXPECT_GE(hi->lo, -kPi / 4 - 1e-3);
    EXPECT_LE(hi->hi, kPi / 4 + 1e-3);
}

TEST(Sweep, CapacitorAroundOrigin) {
    RationalMatrix Z = scalar({1}, {0, 1});
    SweepResult r = sweep(Z, build_grid(Z, 0.0, 10, 10));
    for (const SweepPoint& p : r.points) {
        ASSERT_TRUE(p.has_phase);
        EXPECT_GE(p.lo, -kPi / 2 - 1e-9);
        EXPECT_LE(p.hi, 1e-9);
    }
    EXPECT_NEAR(r.points.back().lo, -kPi / 2, 1e-12);
}

TEST(Sweep, UnwrapsAcrossPi) {
    // -1 + j w sweeps through pi; the unwrapped bounds stay contiguous.
    RationalMatrix Z = scalar({-1, 1}, {1});
    SweepResult r = sweep(Z, build_grid(Z, 1e-2, 1e2, 20));
    ASSERT_TRUE(r.bounds);
    EXPECT_LT(r.bounds->width(), kPi / 2 + 1e-6);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
    RationalMatrix Z = fig14_network(10, 0.2, 1, 0.1, 0.5);
    FrequencyGrid g = build_grid(Z, 1e-2, 1e3, 50);
    setenv("PORTPHASE_THREADS", "1", 1);
    SweepResult a = sweep(Z, g);
    setenv("PORTPHASE_THREADS", "4", 1);
    SweepResult b = sweep(Z, g);
    unsetenv("PORTPHASE_THREADS");
    ASSERT_EQ(a.points.size(), b.points.size());
    for (size_t k = 0; k < a.points.size(); ++k) {
        EXPECT_EQ(a.points[k].lo, b.points[k].lo);
        EXPECT_EQ(a.points[k].hi, b.points[k].hi);
    }
}

TEST(Infinity, Limits) {
    EXPECT_NEAR(std::abs(limit_at_infinity(scalar({1}, {0, 1})).value(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(limit_at_infinity(scalar({1, 1}, {2, 1})).value(0, 0).real(), 1.0, 1e-15);
    auto L = limit_at_infinity(scalar({0, 1}, {1}));
    EXPECT_TRUE(L.improper);
    EXPECT_EQ(L.excess_degree[0], 1);
    CMatrix probe = probe_infinity(scalar({0, 1}, {1}), 1e6);
    EXPECT_NEAR(phases(probe).phases[0], kPi / 2, 1e-12);
}

TEST(PassiveGenerator, Properties) {
    Rng rng(5);
    RationalMatrix R0 = random_passive_network(3, 0, rng);
    CMatrix Z0 = eval(R0, cplx(0, 2.0));
    for (double p : phases(Z0).phases) EXPECT_NEAR(p, 0.0, 1e-9);
    for (int k = 0; k < 10; ++k) {
        RationalMatrix Z = random_passive_network(rng.integer(1, 3), 3, rng);
        SweepResult r = sweep(Z, build_grid(Z, 1e-2, 1e3, 10));
        ASSERT_TRUE(r.bounds);
        EXPECT_GE(r.bounds->lo, -kPi / 2 - 1e-6);
        EXPECT_LE(r.bounds->hi, kPi / 2 + 1e-6);
    }
}
