#include "portphase/connections.hpp"

#include <algorithm>
#include <cmath>

namespace portphase {

namespace {

void require_square(const CMatrix& Z, const char* who) {
    if (Z.rows() != Z.cols()) fail(ErrorCode::DimMismatch, std::string(who) + ": matrix not square");
}

void require_split(const CMatrix& Z, int r, const char* who) {
    if (r < 0 || r > Z.rows()) fail(ErrorCode::InvalidArgument, std::string(who) + ": split out of range");
}

// Generalized inverse of a pivot block and the inclusion test that makes the
// result independent of the choice of inverse.
struct Pivot {
    CMatrix pinv;
    CMatrix P;
    double scale;
};

Pivot make_pivot(const CMatrix& P, double scale) {
    double dim = double(std::max<Eigen::Index>(1, P.rows()));
    return {pseudo_inverse_abs(P, kDefaultRankTol * dim * scale), P, scale};
}

// R(X) within R(P) and N(Y) containing N(P), by projector residuals.
void check_pivot(const Pivot& pv, const CMatrix& Y, const CMatrix& X, double tol, const char* who) {
    const Eigen::Index m = pv.P.rows();
    if (m == 0) return;
    CMatrix I = CMatrix::Identity(m, m);
    double rr = ((I - pv.P * pv.pinv) * X).norm();
    double rk = (Y * (I - pv.pinv * pv.P)).norm();
    if (rr > tol * std::max(1.0, X.norm()) || rk > tol * std::max(1.0, Y.norm()))
        fail(ErrorCode::IllDefined, std::string(who) + ": pivot block singular and not range/kernel compatible");
}

}  // namespace

const char* connection_name(ConnectionKind k) {
    switch (k) {
    case ConnectionKind::Shorted: return "shorted";
    case ConnectionKind::Open: return "open";
    case ConnectionKind::Series: return "series";
    case ConnectionKind::Parallel: return "parallel";
    case ConnectionKind::Hybrid: return "hybrid";
    case ConnectionKind::Cascade: return "cascade";
    case ConnectionKind::CascadeLoad: return "cascade-load";
    case ConnectionKind::HybridCascade: return "hybrid-cascade";
    }
    return "?";
}

std::optional<ConnectionKind> parse_connection(const std::string& name) {
    for (ConnectionKind k : {ConnectionKind::Shorted, ConnectionKind::Open, ConnectionKind::Series,
                             ConnectionKind::Parallel, ConnectionKind::Hybrid, ConnectionKind::Cascade,
                             ConnectionKind::CascadeLoad, ConnectionKind::HybridCascade})
        if (name == connection_name(k)) return k;
    return std::nullopt;
}

CMatrix shorted(const CMatrix& Za, int r, double tol) {
    require_square(Za, "shorted");
    require_split(Za, r, "shorted");
    return schur_complement(Za, r, tol);
}

CMatrix open_ports(const CMatrix& Za, int r) {
    require_square(Za, "open");
    require_split(Za, r, "open");
    return block11(Za, r);
}

CMatrix series(const CMatrix& Za, const CMatrix& Zb) {
    if (Za.rows() != Zb.rows() || Za.cols() != Zb.cols()) fail(ErrorCode::DimMismatch, "series: dimension mismatch");
    return Za + Zb;
}

CMatrix parallel(const CMatrix& Za, const CMatrix& Zb, double tol) {
    require_square(Za, "parallel");
    if (Za.rows() != Zb.rows() || Za.cols() != Zb.cols()) fail(ErrorCode::DimMismatch, "parallel: dimension mismatch");
    Pivot pv = make_pivot(Za + Zb, Za.norm() + Zb.norm());
    check_pivot(pv, Za, Zb, tol, "parallel");
    return Za * pv.pinv * Zb;
}

CMatrix hybrid(const CMatrix& Za, const CMatrix& Zb, int r, double tol) {
    require_square(Za, "hybrid");
    if (Za.rows() != Zb.rows() || Za.cols() != Zb.cols()) fail(ErrorCode::DimMismatch, "hybrid: dimension mismatch");
    require_split(Za, r, "hybrid");
    const int n = int(Za.rows());
    if (r == n) return Za + Zb;
    CMatrix a11 = block11(Za, r), a12 = block12(Za, r), a21 = block21(Za, r), a22 = block22(Za, r);
    CMatrix b11 = block11(Zb, r), b12 = block12(Zb, r), b21 = block21(Zb, r), b22 = block22(Zb, r);
    Pivot pv = make_pivot(a22 + b22, Za.norm() + Zb.norm());
    CMatrix d12 = a12 - b12, d21 = a21 - b21;
    CMatrix Y(r + n - r, n - r), X(n - r, r + n - r);
    Y << d12, a22;
    X << d21, b22;
    check_pivot(pv, Y, X, tol, "hybrid");
    const CMatrix& Pi = pv.pinv;
    CMatrix out(n, n);
    out.topLeftCorner(r, r) = a11 + b11 - d12 * Pi * d21;
    out.topRightCorner(r, n - r) = a12 - d12 * Pi * a22;
    out.bottomLeftCorner(n - r, r) = a21 - a22 * Pi * d21;
    out.bottomRightCorner(n - r, n - r) = a22 * Pi * b22;
    return out;
}

CMatrix cascade(const CMatrix& Za, const CMatrix& Zb, int r, double tol) {
    require_square(Za, "cascade");
    require_square(Zb, "cascade");
    require_split(Za, r, "cascade");
    const int s = int(Za.rows()) - r;
    const int t = int(Zb.rows()) - s;
    if (t < 0) fail(ErrorCode::DimMismatch, "cascade: inner port count exceeds the second network");
    CMatrix a11 = block11(Za, r), a12 = block12(Za, r), a21 = block21(Za, r), a22 = block22(Za, r);
    CMatrix b11 = block11(Zb, s), b12 = block12(Zb, s), b21 = block21(Zb, s), b22 = block22(Zb, s);
    Pivot pv = make_pivot(a22 + b11, Za.norm() + Zb.norm());
    CMatrix Y(r + t, s), X(s, r + t);
    Y << a12, b21;
    X << a21, b12;
    check_pivot(pv, Y, X, tol, "cascade");
    const CMatrix& Pi = pv.pinv;
    CMatrix out(r + t, r + t);
    out.topLeftCorner(r, r) = a11 - a12 * Pi * a21;
    out.topRightCorner(r, t) = a12 * Pi * b12;
    out.bottomLeftCorner(t, r) = b21 * Pi * a21;
    out.bottomRightCorner(t, t) = b22 - b21 * Pi * b12;
    return out;
}

CMatrix cascade_load(const CMatrix& Za, int r, const CMatrix& Zload, double tol) {
    require_square(Za, "cascade-load");
    require_split(Za, r, "cascade-load");
    const int s = int(Za.rows()) - r;
    if (Zload.rows() != s || Zload.cols() != s) fail(ErrorCode::DimMismatch, "cascade-load: load size must equal n - r");
    CMatrix a12 = block12(Za, r), a21 = block21(Za, r), a22 = block22(Za, r);
    Pivot pv = make_pivot(a22 + Zload, Za.norm() + Zload.norm());
    try {
        check_pivot(pv, a12, a21, tol, "cascade-load");
    } catch (const Error&) {
        fail(ErrorCode::IllDefined, "cascade-load: Z22+Zb singular and not range/kernel compatible");
    }
    return block11(Za, r) - a12 * pv.pinv * a21;
}

CMatrix hybrid_cascade(const CMatrix& Za, const CMatrix& Zb, int r, double tol) {
    require_square(Za, "hybrid-cascade");
    require_square(Zb, "hybrid-cascade");
    require_split(Za, r, "hybrid-cascade");
    const int s = int(Za.rows()) - r;
    if (Zb.rows() != s + r) fail(ErrorCode::DimMismatch, "hybrid-cascade: second network must have s + r ports");
    CMatrix a11 = block11(Za, r), a12 = block12(Za, r), a21 = block21(Za, r), a22 = block22(Za, r);
    CMatrix b11 = block11(Zb, s), b12 = block12(Zb, s), b21 = block21(Zb, s), b22 = block22(Zb, s);
    Pivot pv = make_pivot(a22 + b11, Za.norm() + Zb.norm());
    CMatrix d1 = a12 - b21;  // r x s
    CMatrix d2 = a21 - b12;  // s x r
    CMatrix Y(2 * r, s), X(s, 2 * r);
    Y << d1, b21;
    X << d2, b12;
    check_pivot(pv, Y, X, tol, "hybrid-cascade");
    const CMatrix& Pi = pv.pinv;
    CMatrix out(2 * r, 2 * r);
    out.topLeftCorner(r, r) = a11 + b22 - d1 * Pi * d2;
    out.topRightCorner(r, r) = b22 + d1 * Pi * b12;
    out.bottomLeftCorner(r, r) = b22 + b21 * Pi * d2;
    out.bottomRightCorner(r, r) = b22 - b21 * Pi * b12;
    return out;
}

CMatrix connect(ConnectionKind kind, const CMatrix& Za, const CMatrix& Zb, int r, double tol) {
    switch (kind) {
    case ConnectionKind::Shorted: return shorted(Za, r, tol);
    case ConnectionKind::Open: return open_ports(Za, r);
    case ConnectionKind::Series: return series(Za, Zb);
    case ConnectionKind::Parallel: return parallel(Za, Zb, tol);
    case ConnectionKind::Hybrid: return hybrid(Za, Zb, r, tol);
    case ConnectionKind::Cascade: return cascade(Za, Zb, r, tol);
    case ConnectionKind::CascadeLoad: return cascade_load(Za, r, Zb, tol);
    case ConnectionKind::HybridCascade: return hybrid_cascade(Za, Zb, r, tol);
    }
    fail(ErrorCode::InvalidArgument, "connect: unknown kind");
}

Augmented hybrid_augmented(const CMatrix& Za, const CMatrix& Zb, int r) {
    const int n = int(Za.rows()), m = n - r;
    CMatrix a11 = block11(Za, r), a12 = block12(Za, r), a21 = block21(Za, r), a22 = block22(Za, r);
    CMatrix b11 = block11(Zb, r), b12 = block12(Zb, r), b21 = block21(Zb, r), b22 = block22(Zb, r);
    CMatrix M(n + m, n + m);
    M << a11 + b11, a12, a12 - b12,
         a21, a22, a22,
         a21 - b21, a22, a22 + b22;
    return {M, n};
}

Augmented cascade_augmented(const CMatrix& Za, const CMatrix& Zb, int r) {
    const int s = int(Za.rows()) - r, t = int(Zb.rows()) - s;
    CMatrix a11 = block11(Za, r), a12 = block12(Za, r), a21 = block21(Za, r), a22 = block22(Za, r);
    CMatrix b11 = block11(Zb, s), b12 = block12(Zb, s), b21 = block21(Zb, s), b22 = block22(Zb, s);
    CMatrix M(r + t + s, r + t + s);
    M << a11, CMatrix::Zero(r, t), -a12,
         CMatrix::Zero(t, r), b22, b21,
         -a21, b12, a22 + b11;
    return {M, r + t};
}

Augmented hybrid_cascade_augmented(const CMatrix& Za, const CMatrix& Zb, int r) {
    const int s = int(Za.rows()) - r;
    CMatrix a11 = block11(Za, r), a12 = block12(Za, r), a21 = block21(Za, r), a22 = block22(Za, r);
    CMatrix b11 = block11(Zb, s), b12 = block12(Zb, s), b21 = block21(Zb, s), b22 = block22(Zb, s);
    CMatrix M(2 * r + s, 2 * r + s);
    M << a11 + b22, b22, a12 - b21,
         b22, b22, -b21,
         a21 - b12, -b12, a22 + b11;
    return {M, 2 * r};
}

PhaseInterval predict_interval(const PhaseInterval& Ja, const PhaseInterval& Jb) {
    std::optional<PhaseInterval> best;
    for (double k : {0.0, -1.0, 1.0}) {
        PhaseInterval b = Jb.shifted(2.0 * kPi * k);
        PhaseInterval h{std::min(Ja.lo, b.lo), std::max(Ja.hi, b.hi)};
        if (!best || h.width() < best->width() - 1e-15) best = h;
    }
    if (best->width() > kPi + 1e-12) fail(ErrorCode::HullTooWide, "predict_interval: hull wider than pi");
    return *best;
}

SweepResult connect_sweep(ConnectionKind kind, const RationalMatrix& Za, const RationalMatrix& Zb, int r,
                          const FrequencyGrid& grid, double tol) {
    return sweep_function(
        grid, [&](cplx s, size_t) { return connect(kind, eval(Za, s), eval(Zb, s), r); }, tol);
}

RationalMatrix series_exact(const RationalMatrix& Za, const RationalMatrix& Zb) {
    if (Za.n != Zb.n) fail(ErrorCode::DimMismatch, "series_exact: dimension mismatch");
    RationalMatrix out(Za.n);
    for (size_t i = 0; i < out.entries.size(); ++i) out.entries[i] = Za.entries[i] + Zb.entries[i];
    return out;
}

RationalMatrix parallel_exact_scalar(const RationalMatrix& Za, const RationalMatrix& Zb) {
    if (Za.n != 1 || Zb.n != 1) fail(ErrorCode::DimMismatch, "parallel_exact_scalar: one-port networks only");
    const RationalFunction& a = Za.entries[0];
    const RationalFunction& b = Zb.entries[0];
    // za zb / (za + zb) = na nb / (na db + nb da)
    RationalMatrix out(1);
    out.entries[0] = make_rational(poly_mul(a.num, b.num), poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)));
    return out;
}

}  // namespace portphase
