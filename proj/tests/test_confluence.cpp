#include <gtest/gtest.h>

#include "portphase/confluence.hpp"
#include "portphase/connections.hpp"
#include "portphase/harness.hpp"

using namespace portphase;

namespace {

CMatrix scalar(cplx z) { return CMatrix::Constant(1, 1, z); }

double rel(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / std::max(1e-300, b.norm()); }

void expect_code(ErrorCode code, const std::function<void()>& f) {
    try {
        f();
        ADD_FAILURE() << "expected " << error_name(code);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(Eigen::Index(v.size()));
    Eigen::Index i = 0;
    for (double e : v) x(i++) = e;
    return x;
}

}  // namespace

TEST(Validate, BuiltinsPass) {
    for (const NamedRep& r : builtin_reps(3)) {
        ConfluenceDiagnostics d = validate(r.rep);
        EXPECT_TRUE(d.ok()) << r.name << ": " << d.message;
        EXPECT_TRUE(d.dimension_law) << r.name;
    }
    EXPECT_EQ(validate(series_rep(2)).dim, 2);
    EXPECT_EQ(validate(parallel_rep(2)).dim, 4);
}

TEST(Validate, ZeroRepresentationFailsSurjectivity) {
    ConfluenceRep z{RMatrix::Zero(2, 2), RMatrix::Zero(2, 2), RMatrix::Zero(2, 2), RMatrix::Zero(2, 2)};
    ConfluenceDiagnostics d = validate(z);
    EXPECT_FALSE(d.axiom2);
    EXPECT_FALSE(d.ok());
}

TEST(Validate, ShapeMismatch) {
    ConfluenceRep bad = series_rep(2);
    bad.T = RMatrix::Zero(3, 2);
    EXPECT_FALSE(validate(bad).ok());
}

TEST(IndefiniteInner, Examples) {
    IndefiniteVector x{vec({1}), vec({2}), vec({3})}, y{vec({4}), vec({5}), vec({6})};
    EXPECT_DOUBLE_EQ(indefinite_inner(x, y), 4 + 10 - 18);
    IndefiniteVector z{vec({1, 1}), vec({0}), vec({1})};
    expect_code(ErrorCode::DimMismatch, [&] { indefinite_inner(x, z); });
}

TEST(Dual, SeriesAndParallel) {
    // Series: shared current, voltages add. Parallel: currents add, shared voltage.
    const int n = 2;
    const RMatrix I = RMatrix::Identity(n, n), O = RMatrix::Zero(n, n);
    DualRep series_dual{I, I, O, O}, parallel_dual{I, O, I, -I};
    EXPECT_LT(subspace_distance(dual_subspace_basis(dual(series_rep(n))), dual_subspace_basis(series_dual)), 1e-10);
    EXPECT_LT(subspace_distance(dual_subspace_basis(dual(parallel_rep(n))), dual_subspace_basis(parallel_dual)), 1e-10);
}

TEST(Dual, Involution) {
    Rng rng(41);
    for (int k = 0; k < 30; ++k) {
        ConfluenceRep rep = random_confluence(rng.integer(1, 3), rng);
        DualRep d = dual(rep);
        RMatrix prod = duality_product(rep, d), target = RMatrix::Zero(prod.rows(), prod.cols());
        target.topLeftCorner(rep.nc(), rep.nc()) = RMatrix::Identity(rep.nc(), rep.nc());
        EXPECT_LT((prod - target).norm(), 1e-9);
        ConfluenceRep back = as_primal(dual(as_primal(d)));
        EXPECT_LT(subspace_distance(subspace_basis(back), subspace_basis(rep)), 1e-8);
    }
}

TEST(Dual, OrthogonalUnderIndefiniteForm) {
    Rng rng(42);
    for (int k = 0; k < 20; ++k) {
        const int n = rng.integer(1, 3);
        ConfluenceRep rep = random_confluence(n, rng);
        RMatrix G = subspace_basis(rep), H = dual_subspace_basis(dual(rep));
        EXPECT_EQ(G.cols() + H.cols(), 3 * n);
        for (Eigen::Index a = 0; a < G.cols(); ++a)
            for (Eigen::Index b = 0; b < H.cols(); ++b) {
                IndefiniteVector x{G.col(a).head(n), G.col(a).segment(n, n), G.col(a).tail(n)};
                IndefiniteVector y{H.col(b).head(n), H.col(b).segment(n, n), H.col(b).tail(n)};
                EXPECT_NEAR(indefinite_inner(x, y), 0.0, 1e-9);
            }
    }
}

TEST(Parametrize, IdentityAndRankDeficient) {
    ConfluenceRep s = series_rep(2);
    ConfluenceRep same = parametrize(s, RMatrix::Zero(2, 2), RMatrix::Identity(2, 2));
    EXPECT_EQ(same.stacked(), s.stacked());
    expect_code(ErrorCode::RankDeficientParameter, [&] { parametrize(s, RMatrix::Zero(2, 2), RMatrix::Zero(2, 2)); });
    DualRep d = dual(parallel_rep(2));
    RMatrix L = RMatrix::Ones(2, 2);
    expect_code(ErrorCode::RankDeficientParameter, [&] { parametrize_dual(d, RMatrix::Zero(2, 2), L); });
    expect_code(ErrorCode::DimMismatch, [&] { parametrize(s, RMatrix::Zero(3, 2), RMatrix::Identity(2, 2)); });
}

TEST(Parametrize, KeepsSubspace) {
    Rng rng(43);
    for (int k = 0; k < 20; ++k) {
        const int n = rng.integer(1, 3);
        ConfluenceRep rep = random_confluence(n, rng);
        const int m = int(rep.U.rows());
        RMatrix P = random_real(n, m, rng), Q = random_real(m, m, rng);
        ConfluenceRep p = parametrize(rep, P, Q);
        EXPECT_LT(subspace_distance(subspace_basis(p), subspace_basis(rep)), 1e-8);
    }
}

TEST(AssembleM, SeriesScalars) {
    DualRep d = dual(series_rep(1));
    CMatrix M = assemble_M(d, scalar(cplx(2, 1)), scalar(cplx(3, -1)));
    EXPECT_NEAR(std::abs(M(0, 0) - 5.0), 0.0, 1e-12);
    EXPECT_EQ(M.rows(), d.stacked().rows());
}

TEST(AssembleM, CompressedMatchesDirect) {
    Rng rng(44);
    for (int k = 0; k < 30; ++k) {
        const int n = rng.integer(1, 3);
        DualRep d = dual(random_confluence(n, rng));
        CMatrix Za = random_complex(n, n, rng), Zb = random_complex(n, n, rng);
        int rank = -1;
        CMatrix Mc = assemble_M_compressed(d, Za, Zb, &rank);
        EXPECT_LT(rel(Mc, assemble_M(d, Za, Zb)), 1e-10);
        EXPECT_GE(rank, 0);
    }
}

TEST(GeneralConnect, SeriesAndParallel) {
    EXPECT_NEAR(std::abs(general_connect(dual(series_rep(1)), scalar(2), scalar(3))(0, 0) - 5.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(general_connect(dual(parallel_rep(1)), scalar(4), scalar(4))(0, 0) - 2.0), 0.0, 1e-12);
}

TEST(GeneralConnect, NewConnectionByPortEquations) {
    // ia = (x, x), ib = (x, y), ic = (x, y); vc1 = va1 + va2 + vb1, vc2 = vb2.
    Rng rng(45);
    CMatrix Ea(2, 2), Eb = CMatrix::Identity(2, 2);
    Ea << 1, 0, 1, 0;
    for (int k = 0; k < 20; ++k) {
        PhaseInterval J = random_interval(rng, 2.5);
        CMatrix Za = random_sectorial(2, J, rng), Zb = random_sectorial(2, J, rng);
        CMatrix expect = Ea.transpose() * Za * Ea + Eb.transpose() * Zb * Eb;
        EXPECT_LT(rel(general_connect(dual(new_connection_rep()), Za, Zb), expect), 1e-9);
    }
}

TEST(GeneralConnect, BuiltinsMatchDirectFormulas) {
    Rng rng(46);
    for (int k = 0; k < 20; ++k) {
        PhaseInterval J = random_interval(rng, 2.5);
        CMatrix A3 = random_sectorial(3, J, rng), B3 = random_sectorial(3, J, rng);
        EXPECT_LT(rel(general_connect(dual(series_rep(3)), A3, B3), series(A3, B3)), 1e-9);
        EXPECT_LT(rel(general_connect(dual(parallel_rep(3)), A3, B3), parallel(A3, B3)), 1e-8);
        EXPECT_LT(rel(general_connect(dual(hybrid_rep(3, 1)), A3, B3), hybrid(A3, B3, 1)), 1e-8);
        CMatrix A2 = random_sectorial(2, J, rng), B3c = random_sectorial(3, J, rng);
        EXPECT_LT(rel(general_connect(dual(cascade_rep(1, 1, 2)), A2, B3c), cascade(A2, B3c, 1)), 1e-8);
        CMatrix B2 = random_sectorial(2, J, rng);
        EXPECT_LT(rel(general_connect(dual(hybrid_cascade_rep(1, 1)), A2, B2), hybrid_cascade(A2, B2, 1)), 1e-8);
    }
}

TEST(Exists, PositiveSemidefiniteAlwaysConnects) {
    Rng rng(47);
    for (const NamedRep& r : builtin_reps(2)) {
        DualRep d = dual(r.rep);
        CMatrix Xa = random_complex(r.rep.na(), r.rep.na(), rng), Xb = random_complex(r.rep.nb(), r.rep.nb(), rng);
        EXPECT_TRUE(exists(d, Xa * Xa.adjoint(), Xb * Xb.adjoint())) << r.name;
    }
}

TEST(Exists, ResistiveLoadHasNoImpedance) {
    ResistiveFixture f = fig13_resistive(1, 1, 1, 1);
    DualRep d = dual(cascade_rep(1, 1, 0));
    EXPECT_FALSE(exists(d, f.Za, scalar(f.RN)));
    expect_code(ErrorCode::NotExists, [&] { general_connect(d, f.Za, scalar(f.RN)); });
}

TEST(BuiltinRep, Parsing) {
    EXPECT_EQ(builtin_rep("series:3").nc(), 3);
    EXPECT_EQ(builtin_rep("cascade:1:2:3").nc(), 4);
    EXPECT_EQ(builtin_rep("hybrid-cascade:2:1").nc(), 4);
    expect_code(ErrorCode::InvalidArgument, [] { builtin_rep("nope"); });
    expect_code(ErrorCode::Parse, [] { builtin_rep("series:x"); });
    expect_code(ErrorCode::InvalidArgument, [] { builtin_rep("hybrid:3"); });
}

TEST(RandomConfluence, DimensionLaw) {
    Rng rng(48);
    for (int k = 0; k < 50; ++k) {
        const int n = rng.integer(1, 4);
        ConfluenceDiagnostics d = validate(random_confluence(n, rng));
        EXPECT_TRUE(d.ok()) << d.message;
        EXPECT_TRUE(d.dimension_law);
        EXPECT_GE(d.dim, n);
        EXPECT_LE(d.dim, 2 * n);
    }
}
