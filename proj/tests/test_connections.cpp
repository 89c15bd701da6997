#include <gtest/gtest.h>

#include "portphase/connections.hpp"
#include "portphase/harness.hpp"

using namespace portphase;

namespace {

const cplx j(0.0, 1.0);

CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
    CMatrix M(2, 2);
    M << a, b, c, d;
    return M;
}

CMatrix scalar(cplx z) { return CMatrix::Constant(1, 1, z); }

double rel(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / std::max(1e-300, b.norm()); }

// Port-equation elimination: columns are the port voltages for unit external currents.
CMatrix hybrid_by_elimination(const CMatrix& Za, const CMatrix& Zb, int r) {
    // Leading r ports in series (shared current, voltages add), trailing m in parallel
    // (shared voltage, currents add). Unknown: the a-side share x of the parallel currents.
    const int n = int(Za.rows()), m = n - r;
    CMatrix out(n, n);
    for (int k = 0; k < n; ++k) {
        CVector i = CVector::Zero(n);
        i(k) = 1;
        CVector i1 = i.head(r), i2 = i.tail(m);
        // a21 i1 + a22 x = b21 i1 + b22 (i2 - x)
        CMatrix A = block22(Za, r) + block22(Zb, r);
        CVector rhs = block21(Zb, r) * i1 + block22(Zb, r) * i2 - block21(Za, r) * i1;
        CVector x = A.fullPivLu().solve(rhs);
        CVector ia(n), ib(n);
        ia << i1, x;
        ib << i1, i2 - x;
        CVector va = Za * ia, vb = Zb * ib;
        CVector v(n);
        v << va.head(r) + vb.head(r), va.tail(m);
        out.col(k) = v;
    }
    return out;
}

// a's trailing s ports face b's leading s ports: equal voltages, opposite currents.
CMatrix cascade_by_elimination(const CMatrix& Za, const CMatrix& Zb, int r) {
    const int s = int(Za.rows()) - r, t = int(Zb.rows()) - s;
    CMatrix out(r + t, r + t);
    for (int k = 0; k < r + t; ++k) {
        CVector i = CVector::Zero(r + t);
        i(k) = 1;
        CVector i1 = i.head(r), i2 = i.tail(t);
        // a21 i1 + a22 x = b11 (-x) + b12 i2
        CMatrix A = block22(Za, r) + block11(Zb, s);
        CVector x = A.fullPivLu().solve(block12(Zb, s) * i2 - block21(Za, r) * i1);
        CVector ia(r + s), ib(s + t);
        ia << i1, x;
        ib << -x, i2;
        CVector v(r + t);
        v << (Za * ia).head(r), (Zb * ib).tail(t);
        out.col(k) = v;
    }
    return out;
}

}  // namespace

TEST(Shorted, Examples) {
    CMatrix bd = CMatrix::Zero(3, 3);
    bd.topLeftCorner(2, 2) = mat2(1, j, 2, 3);
    bd(2, 2) = 4;
    EXPECT_LT((shorted(bd, 2) - mat2(1, j, 2, 3)).norm(), 1e-14);
    EXPECT_NEAR(shorted(mat2(0.75, 0.25, 0.25, 0.75), 1)(0, 0).real(), 2.0 / 3.0, 1e-14);
}

TEST(Open, Examples) {
    EXPECT_LT((open_ports(CMatrix::Identity(3, 3), 2) - CMatrix::Identity(2, 2)).norm(), 1e-15);
    EXPECT_DOUBLE_EQ(open_ports(mat2(0.75, 0.25, 0.25, 0.75), 1)(0, 0).real(), 0.75);
    CMatrix Z = mat2(1, 2, 3, j);
    EXPECT_EQ(open_ports(Z, 2), Z);
}

TEST(Series, Examples) {
    EXPECT_NEAR(series(scalar(2), scalar(2))(0, 0).real(), 4.0, 1e-15);
    CMatrix Z = mat2(1, 2, 3, j);
    EXPECT_EQ(series(Z, CMatrix::Zero(2, 2)), Z);
    EXPECT_NEAR(std::arg(series(scalar(1), scalar(j))(0, 0)), kPi / 4, 1e-15);
    try {
        series(Z, CMatrix::Identity(3, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimMismatch);
    }
}

TEST(Parallel, Examples) {
    EXPECT_NEAR(parallel(scalar(3), scalar(3))(0, 0).real(), 1.5, 1e-15);
    CMatrix Z = mat2(2, 1, 1, 2);
    EXPECT_LT((parallel(Z, Z) - Z / 2.0).norm(), 1e-14);
    EXPECT_LT((parallel(mat2(1, 0, 0, j), mat2(1, 0, 0, j)) - mat2(0.5, 0, 0, 0.5 * j)).norm(), 1e-14);
}

TEST(Hybrid, DegenerateSplits) {
    Rng rng(21);
    CMatrix A = random_sectorial(3, {-0.5, 0.5}, rng), B = random_sectorial(3, {-0.5, 0.5}, rng);
    EXPECT_LT(rel(hybrid(A, B, 3), A + B), 1e-14);
    EXPECT_LT(rel(hybrid(A, B, 0), parallel(A, B)), 1e-10);
}

TEST(Hybrid, MatchesEliminationAndAugmented) {
    Rng rng(22);
    for (int k = 0; k < 50; ++k) {
        int n = rng.integer(2, 5), r = rng.integer(1, n - 1);
        PhaseInterval J = random_interval(rng, 2.5);
        CMatrix A = random_sectorial(n, J, rng), B = random_sectorial(n, J, rng);
        CMatrix direct = hybrid(A, B, r);
        EXPECT_LT(rel(direct, hybrid_by_elimination(A, B, r)), 1e-9);
        Augmented aug = hybrid_augmented(A, B, r);
        EXPECT_LT(rel(direct, schur_complement(aug.M, aug.keep)), 1e-9);
    }
}

TEST(Cascade, MatchesEliminationAndAugmented) {
    Rng rng(23);
    for (int k = 0; k < 50; ++k) {
        int r = rng.integer(1, 3), s = rng.integer(1, 3), t = rng.integer(1, 3);
        PhaseInterval J = random_interval(rng, 2.5);
        CMatrix A = random_sectorial(r + s, J, rng), B = random_sectorial(s + t, J, rng);
        CMatrix direct = cascade(A, B, r);
        ASSERT_EQ(direct.rows(), r + t);
        EXPECT_LT(rel(direct, cascade_by_elimination(A, B, r)), 1e-9);
        Augmented aug = cascade_augmented(A, B, r);
        EXPECT_LT(rel(direct, schur_complement(aug.M, aug.keep)), 1e-9);
    }
}

TEST(Cascade, ZeroLeadingBlockGivesShorted) {
    Rng rng(24);
    CMatrix A = random_sectorial(3, {-1, 1}, rng);
    CMatrix B = CMatrix::Zero(2, 2);
    B(1, 1) = 2.0;  // Zb11 = 0, Zb12 = Zb21 = 0
    CMatrix Zc = cascade(A, B, 2);
    EXPECT_LT(rel(Zc.topLeftCorner(2, 2), shorted(A, 2)), 1e-12);
}

TEST(CascadeLoad, Examples) {
    Rng rng(25);
    CMatrix A = random_sectorial(3, {-1, 1}, rng);
    EXPECT_LT(rel(cascade_load(A, 2, CMatrix::Zero(1, 1)), shorted(A, 2)), 1e-12);
    EXPECT_LT(rel(cascade_load(A, 2, scalar(1e9)), open_ports(A, 2)), 1e-6);
    ResistiveFixture f = fig13_resistive(1, 1, 1, 1);
    try {
        cascade_load(f.Za, 1, scalar(f.RN));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IllDefined);
        EXPECT_NE(std::string(e.what()).find("Z22+Zb singular"), std::string::npos);
    }
}

TEST(HybridCascade, ZeroSecondNetwork) {
    Rng rng(26);
    CMatrix A = random_sectorial(2, {-1, 1}, rng);
    CMatrix Zc = hybrid_cascade(A, CMatrix::Zero(2, 2), 1);
    CMatrix expect = CMatrix::Zero(2, 2);
    expect(0, 0) = shorted(A, 1)(0, 0);
    EXPECT_LT((Zc - expect).norm(), 1e-12);
}

TEST(HybridCascade, MatchesAugmented) {
    Rng rng(27);
    for (int k = 0; k < 50; ++k) {
        int r = rng.integer(1, 3), s = rng.integer(1, 3);
        PhaseInterval J = random_interval(rng, 2.5);
        CMatrix A = random_sectorial(r + s, J, rng), B = random_sectorial(s + r, J, rng);
        CMatrix direct = hybrid_cascade(A, B, r);
        ASSERT_EQ(direct.rows(), 2 * r);
        Augmented aug = hybrid_cascade_augmented(A, B, r);
        EXPECT_LT(rel(direct, schur_complement(aug.M, aug.keep)), 1e-9);
    }
}

TEST(HybridCascade, SectorPreserved) {
    Rng rng(28);
    for (int k = 0; k < 50; ++k) {
        CMatrix A = random_sectorial(2, {-kPi / 4, kPi / 4}, rng), B = random_sectorial(2, {-kPi / 4, kPi / 4}, rng);
        EXPECT_TRUE(in_phase_set(hybrid_cascade(A, B, 1), {-kPi / 4, kPi / 4}));
    }
}

TEST(HybridCascade, DimMismatch) {
    try {
        hybrid_cascade(CMatrix::Identity(3, 3), CMatrix::Identity(2, 2), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimMismatch);
    }
}

TEST(Connect, PassiveNetworksStayPassive) {
    Rng rng(29);
    for (int k = 0; k < 10; ++k) {
        RationalMatrix a = random_passive_network(2, 2, rng), b = random_passive_network(2, 2, rng);
        for (double w : {0.1, 1.0, 10.0}) {
            CMatrix Zc = cascade(eval(a, cplx(0, w)), eval(b, cplx(0, w)), 1);
            auto J = phase_interval(Zc);
            ASSERT_TRUE(J);
            EXPECT_GE(J->lo, -kPi / 2 - 1e-6);
            EXPECT_LE(J->hi, kPi / 2 + 1e-6);
        }
    }
}

TEST(PredictInterval, Examples) {
    PhaseInterval a = predict_interval({0, 0}, {0, 0});
    EXPECT_EQ(a.lo, 0.0);
    EXPECT_EQ(a.hi, 0.0);
    PhaseInterval b = predict_interval({-kPi / 2, kPi / 2}, {-kPi / 2, 0});
    EXPECT_NEAR(b.lo, -kPi / 2, 1e-15);
    EXPECT_NEAR(b.hi, kPi / 2, 1e-15);
    PhaseInterval c = predict_interval({-kPi / 4, kPi / 4}, {0, kPi / 2});
    EXPECT_NEAR(c.lo, -kPi / 4, 1e-15);
    EXPECT_NEAR(c.hi, kPi / 2, 1e-15);
    try {
        predict_interval({0, 0.1}, {3.0, 3.2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::HullTooWide);
    }
}

TEST(ExactNetworks, SeriesAndParallel) {
    RationalMatrix a = fig4_network(1, 1, 2, 1), b = fig14_network(10, 0.2, 1, 0.1, 0.5);
    RationalMatrix s = series_exact(a, b);
    cplx p(0.0, 3.0);
    EXPECT_LT(rel(eval(s, p), eval(a, p) + eval(b, p)), 1e-13);
    RationalMatrix r1(1), r2(1);
    r1.at(0, 0) = make_rational({1}, {0, 1});
    r2.at(0, 0) = make_rational({2, 1}, {1});
    RationalMatrix par = parallel_exact_scalar(r1, r2);
    EXPECT_LT(rel(eval(par, p), parallel(eval(r1, p), eval(r2, p))), 1e-13);
}
