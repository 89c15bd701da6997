#include "portphase/confluence.hpp"

#include <algorithm>
#include <sstream>

namespace portphase {

namespace {

int numerical_rank(const Eigen::JacobiSVD<RMatrix>& svd, Eigen::Index rows, Eigen::Index cols, double tol) {
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    double cut = tol * sv(0) * double(std::max(rows, cols));
    int r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    return r;
}

int rank_of(const RMatrix& A, double tol) {
    if (A.size() == 0) return 0;
    Eigen::JacobiSVD<RMatrix> svd(A);
    return numerical_rank(svd, A.rows(), A.cols(), tol);
}

// Orthonormal basis of the null space, as columns.
RMatrix null_space(const RMatrix& A, double tol) {
    if (A.rows() == 0) return RMatrix::Identity(A.cols(), A.cols());
    Eigen::JacobiSVD<RMatrix> svd(A, Eigen::ComputeFullV);
    int r = numerical_rank(svd, A.rows(), A.cols(), tol);
    return svd.matrixV().rightCols(A.cols() - r);
}

RMatrix real_pinv(const RMatrix& A, double tol) {
    if (A.size() == 0) return RMatrix::Zero(A.cols(), A.rows());
    Eigen::JacobiSVD<RMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    int r = numerical_rank(svd, A.rows(), A.cols(), tol);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(svd.singularValues().size());
    for (int i = 0; i < r; ++i) inv(i) = 1.0 / svd.singularValues()(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

RMatrix kernel_system(const RMatrix& S, const RMatrix& T, const RMatrix& U, const RMatrix& W) {
    const Eigen::Index nc = S.rows(), k = U.rows(), na = S.cols(), nb = T.cols();
    RMatrix K = RMatrix::Zero(nc + k, na + nb + nc);
    K.block(0, 0, nc, na) = S;
    K.block(0, na, nc, nb) = T;
    K.block(0, na + nb, nc, nc) = -RMatrix::Identity(nc, nc);
    K.block(nc, 0, k, na) = U;
    K.block(nc, na, k, nb) = W;
    return K;
}

bool shapes_consistent(const RMatrix& S, const RMatrix& T, const RMatrix& U, const RMatrix& W) {
    return S.rows() == T.rows() && U.rows() == W.rows() && S.cols() == U.cols() && T.cols() == W.cols();
}

CMatrix block_diag(const CMatrix& A, const CMatrix& B) {
    CMatrix D = CMatrix::Zero(A.rows() + B.rows(), A.cols() + B.cols());
    D.topLeftCorner(A.rows(), A.cols()) = A;
    D.bottomRightCorner(B.rows(), B.cols()) = B;
    return D;
}

RMatrix eye_block(Eigen::Index rows, Eigen::Index cols, Eigen::Index r0, Eigen::Index c0, Eigen::Index k, double v = 1.0) {
    RMatrix M = RMatrix::Zero(rows, cols);
    for (Eigen::Index i = 0; i < k; ++i) M(r0 + i, c0 + i) = v;
    return M;
}

}  // namespace

RMatrix ConfluenceRep::stacked() const {
    RMatrix A(S.rows() + U.rows(), S.cols() + T.cols());
    A << S, T, U, W;
    return A;
}

RMatrix DualRep::stacked() const {
    RMatrix B(Phi.rows() + Xi.rows(), Phi.cols() + Psi.cols());
    B << Phi, Psi, Xi, Omega;
    return B;
}

double indefinite_inner(const IndefiniteVector& x, const IndefiniteVector& y) {
    if (x.a.size() != y.a.size() || x.b.size() != y.b.size() || x.c.size() != y.c.size())
        fail(ErrorCode::DimMismatch, "indefinite_inner: dimension mismatch");
    return x.a.dot(y.a) + x.b.dot(y.b) - x.c.dot(y.c);
}

RMatrix subspace_basis(const ConfluenceRep& rep, double tol) {
    if (!shapes_consistent(rep.S, rep.T, rep.U, rep.W)) fail(ErrorCode::DimMismatch, "confluence: inconsistent block shapes");
    return null_space(kernel_system(rep.S, rep.T, rep.U, rep.W), tol);
}

RMatrix dual_subspace_basis(const DualRep& d, double tol) {
    if (!shapes_consistent(d.Phi, d.Psi, d.Xi, d.Omega)) fail(ErrorCode::DimMismatch, "dual: inconsistent block shapes");
    return null_space(kernel_system(d.Phi, d.Psi, d.Xi, d.Omega), tol);
}

double subspace_distance(const RMatrix& A, const RMatrix& B) {
    if (A.cols() != B.cols() || A.rows() != B.rows()) return 1.0;
    if (A.cols() == 0) return 0.0;
    Eigen::HouseholderQR<RMatrix> qa(A), qb(B);
    RMatrix Qa = qa.householderQ() * RMatrix::Identity(A.rows(), A.cols());
    RMatrix Qb = qb.householderQ() * RMatrix::Identity(B.rows(), B.cols());
    // Residual of projecting one basis onto the other.
    return std::max((Qb - Qa * (Qa.transpose() * Qb)).norm(), (Qa - Qb * (Qb.transpose() * Qa)).norm());
}

ConfluenceDiagnostics validate(const ConfluenceRep& rep, double tol) {
    ConfluenceDiagnostics dg;
    if (!shapes_consistent(rep.S, rep.T, rep.U, rep.W)) {
        dg.shapes_ok = false;
        dg.message = "inconsistent block shapes";
        return dg;
    }
    const int na = rep.na(), nb = rep.nb(), nc = rep.nc();
    RMatrix G = subspace_basis(rep, tol);
    dg.dim = int(G.cols());
    RMatrix ab = G.topRows(na + nb);
    RMatrix c = G.bottomRows(nc);
    dg.axiom1 = rank_of(ab, tol) == dg.dim;
    dg.axiom2 = rank_of(c, tol) == nc;
    dg.dimension_law = dg.dim >= nc && dg.dim <= na + nb;
    std::ostringstream os;
    os << "dim G = " << dg.dim << "; axiom (i) " << (dg.axiom1 ? "holds" : "fails: some (0,0,c) with c != 0 lies in G")
       << "; axiom (ii) " << (dg.axiom2 ? "holds" : "fails: c-component not surjective");
    dg.message = os.str();
    return dg;
}

DualRep dual(const ConfluenceRep& rep, double tol) {
    ConfluenceDiagnostics dg = validate(rep, tol);
    if (!dg.ok()) fail(ErrorCode::InvalidConfluence, "dual: " + dg.message);
    const int na = rep.na(), nb = rep.nb(), nc = rep.nc();
    RMatrix A = rep.stacked();
    RMatrix E = RMatrix::Zero(A.rows(), nc);
    E.topRows(nc) = RMatrix::Identity(nc, nc);
    // Minimum-norm [Phi Psi]^T solving A [Phi Psi]^T = [I; 0].
    RMatrix top = (real_pinv(A, tol) * E).transpose();
    RMatrix N = null_space(A, tol).transpose();
    const int m = std::max<int>(na + nb - nc, int(N.rows()));
    RMatrix bottom = RMatrix::Zero(m, na + nb);
    bottom.topRows(N.rows()) = N;

    DualRep d{top.leftCols(na), top.rightCols(nb), bottom.leftCols(na), bottom.rightCols(nb)};
    RMatrix prod = duality_product(rep, d);
    RMatrix target = RMatrix::Zero(prod.rows(), prod.cols());
    target.topLeftCorner(nc, nc) = RMatrix::Identity(nc, nc);
    if ((prod - target).norm() > 1e-8 * std::max(1.0, A.norm()))
        fail(ErrorCode::InvalidConfluence, "dual: duality product not attained");
    return d;
}

ConfluenceRep as_primal(const DualRep& d) { return {d.Phi, d.Psi, d.Xi, d.Omega}; }

RMatrix duality_product(const ConfluenceRep& rep, const DualRep& d) {
    return rep.stacked() * d.stacked().transpose();
}

ConfluenceRep parametrize(const ConfluenceRep& rep, const RMatrix& P, const RMatrix& Q) {
    const Eigen::Index k = rep.U.rows();
    if (P.rows() != rep.S.rows() || P.cols() != k || Q.rows() != k || Q.cols() != k)
        fail(ErrorCode::DimMismatch, "parametrize: parameter shapes do not match the representation");
    if (rank_of(Q, 1e-12) < k) fail(ErrorCode::RankDeficientParameter, "parametrize: Q is rank deficient");
    return {rep.S + P * rep.U, rep.T + P * rep.W, Q * rep.U, Q * rep.W};
}

DualRep parametrize_dual(const DualRep& d, const RMatrix& Gamma, const RMatrix& Lambda) {
    const Eigen::Index k = d.Xi.rows();
    if (Gamma.rows() != d.Phi.rows() || Gamma.cols() != k || Lambda.rows() != k || Lambda.cols() != k)
        fail(ErrorCode::DimMismatch, "parametrize_dual: parameter shapes do not match the representation");
    if (rank_of(Lambda, 1e-12) < k) fail(ErrorCode::RankDeficientParameter, "parametrize_dual: Lambda is rank deficient");
    return {d.Phi + Gamma * d.Xi, d.Psi + Gamma * d.Omega, Lambda * d.Xi, Lambda * d.Omega};
}

CMatrix assemble_M(const DualRep& d, const CMatrix& Za, const CMatrix& Zb) {
    if (Za.rows() != d.na() || Za.cols() != d.na() || Zb.rows() != d.nb() || Zb.cols() != d.nb())
        fail(ErrorCode::DimMismatch, "assemble_M: impedance sizes do not match the dual representation");
    CMatrix B = d.stacked().cast<cplx>();
    return B * block_diag(Za, Zb) * B.transpose();
}

CMatrix assemble_M_compressed(const DualRep& d, const CMatrix& Za, const CMatrix& Zb, int* rank) {
    if (Za.rows() != d.na() || Zb.rows() != d.nb()) fail(ErrorCode::DimMismatch, "assemble_M_compressed: size mismatch");
    RMatrix B = d.stacked();
    Eigen::JacobiSVD<RMatrix> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
    int k = numerical_rank(svd, B.rows(), B.cols(), 1e-12);
    if (rank) *rank = k;
    // B = X [Sigma; 0] with X = U diag(s_1..s_k, 1..1) nonsingular and Sigma = V_k^T.
    RMatrix X = svd.matrixU();
    for (int i = 0; i < k; ++i) X.col(i) *= svd.singularValues()(i);
    CMatrix Sigma = svd.matrixV().leftCols(k).transpose().cast<cplx>();
    CMatrix inner = CMatrix::Zero(B.rows(), B.rows());
    inner.topLeftCorner(k, k) = Sigma * block_diag(Za, Zb) * Sigma.transpose();
    CMatrix Xc = X.cast<cplx>();
    return Xc * inner * Xc.transpose();
}

bool exists(const DualRep& d, const CMatrix& Za, const CMatrix& Zb, double tol) {
    return well_defined_schur(assemble_M(d, Za, Zb), d.nc(), tol);
}

CMatrix general_connect(const DualRep& d, const CMatrix& Za, const CMatrix& Zb, double tol) {
    CMatrix M = assemble_M(d, Za, Zb);
    if (!well_defined_schur(M, d.nc(), tol))
        fail(ErrorCode::NotExists, "general_connect: M/22 is not well defined, the connected network has no Z-matrix");
    return schur_complement(M, d.nc(), tol);
}

ConfluenceRep series_rep(int n) {
    return {RMatrix::Identity(n, n), RMatrix::Zero(n, n), RMatrix::Identity(n, n), -RMatrix::Identity(n, n)};
}

ConfluenceRep parallel_rep(int n) {
    return {RMatrix::Identity(n, n), RMatrix::Identity(n, n), RMatrix::Zero(n, n), RMatrix::Zero(n, n)};
}

ConfluenceRep new_connection_rep() {
    RMatrix A(4, 4);
    A << 1, 0, 0, 0,
         0, 0, 0, 1,
         1, -1, 0, 0,
         1, 0, -1, 0;
    return {A.block(0, 0, 2, 2), A.block(0, 2, 2, 2), A.block(2, 0, 2, 2), A.block(2, 2, 2, 2)};
}

ConfluenceRep hybrid_rep(int n, int r) {
    if (r < 0 || r > n) fail(ErrorCode::InvalidArgument, "hybrid_rep: split out of range");
    // Leading r ports carry a common current (series); trailing ports share voltage (parallel).
    return {RMatrix::Identity(n, n), eye_block(n, n, r, r, n - r), eye_block(n, n, 0, 0, r),
            eye_block(n, n, 0, 0, r, -1.0)};
}

ConfluenceRep cascade_rep(int r, int s, int t) {
    if (r < 0 || s < 0 || t < 0) fail(ErrorCode::InvalidArgument, "cascade_rep: negative block size");
    // Outer currents are a's first r and b's last t; inner ports carry a2 = -b1 (written a2 + b1 = 0).
    return {eye_block(r + t, r + s, 0, 0, r), eye_block(r + t, s + t, r, s, t), eye_block(s, r + s, 0, r, s),
            eye_block(s, s + t, 0, 0, s)};
}

ConfluenceRep hybrid_cascade_rep(int r, int s) {
    if (r < 0 || s < 0) fail(ErrorCode::InvalidArgument, "hybrid_cascade_rep: negative block size");
    RMatrix S = RMatrix::Zero(2 * r, r + s);
    S.topLeftCorner(r, r) = RMatrix::Identity(r, r);
    S.block(r, 0, r, r) = -RMatrix::Identity(r, r);
    return {S, eye_block(2 * r, s + r, r, s, r), eye_block(s, r + s, 0, r, s), eye_block(s, s + r, 0, 0, s)};
}

std::vector<NamedRep> builtin_reps(int n) {
    return {{"series", series_rep(n)},
            {"parallel", parallel_rep(n)},
            {"new", new_connection_rep()},
            {"hybrid", hybrid_rep(n, std::max(1, n / 2))},
            {"cascade", cascade_rep(1, 1, 1)},
            {"hybrid-cascade", hybrid_cascade_rep(1, 1)}};
}

ConfluenceRep builtin_rep(const std::string& name_and_sizes) {
    std::vector<std::string> parts;
    std::stringstream ss(name_and_sizes);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.empty()) fail(ErrorCode::InvalidArgument, "builtin_rep: empty name");
    std::vector<int> args;
    try {
        for (size_t i = 1; i < parts.size(); ++i) args.push_back(std::stoi(parts[i]));
    } catch (const std::exception&) {
        fail(ErrorCode::Parse, "builtin_rep: bad size in '" + name_and_sizes + "'");
    }
    auto need = [&](size_t k) {
        if (args.size() != k) fail(ErrorCode::InvalidArgument, "builtin_rep: '" + parts[0] + "' takes " + std::to_string(k) + " sizes");
    };
    const std::string& name = parts[0];
    if (name == "series" || name == "parallel") {
        if (args.empty()) args.push_back(2);
        need(1);
        return name == "series" ? series_rep(args[0]) : parallel_rep(args[0]);
    }
    if (name == "new") {
        need(0);
        return new_connection_rep();
    }
    if (name == "hybrid") {
        need(2);
        return hybrid_rep(args[0], args[1]);
    }
    if (name == "cascade") {
        need(3);
        return cascade_rep(args[0], args[1], args[2]);
    }
    if (name == "hybrid-cascade") {
        need(2);
        return hybrid_cascade_rep(args[0], args[1]);
    }
    fail(ErrorCode::InvalidArgument, "builtin_rep: unknown representation '" + name + "'");
}

}  // namespace portphase
