#include "portphase/subtractions.hpp"

#include <cmath>

namespace portphase {

namespace {

// Plain inverse of a pivot, refused when numerically singular.
Eigen::PartialPivLU<CMatrix> pivot_lu(const CMatrix& Q, const char* who) {
    if (Q.rows() != Q.cols()) fail(ErrorCode::DimMismatch, std::string(who) + ": pivot not square");
    Eigen::JacobiSVD<CMatrix> svd(Q);
    const auto& sv = svd.singularValues();
    if (sv.size() > 0) {
        double smax = sv(0), smin = sv(sv.size() - 1);
        if (!(smin > 0.0) || smax / smin > kPivotCondLimit)
            fail(ErrorCode::SingularPivot, std::string(who) + ": pivot is singular (condition number above 1e12)");
    }
    return Eigen::PartialPivLU<CMatrix>(Q);
}

void same_dims(const CMatrix& a, const CMatrix& b, const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
        fail(ErrorCode::DimMismatch, std::string(who) + ": dimension mismatch");
}

}  // namespace

const char* subtraction_name(SubtractionKind k) {
    switch (k) {
    case SubtractionKind::Series: return "series";
    case SubtractionKind::Parallel: return "parallel";
    case SubtractionKind::Hybrid: return "hybrid";
    case SubtractionKind::Cascade: return "cascade";
    case SubtractionKind::HybridCascade: return "hybrid-cascade";
    }
    return "?";
}

std::optional<SubtractionKind> parse_subtraction(const std::string& name) {
    for (SubtractionKind k : {SubtractionKind::Series, SubtractionKind::Parallel, SubtractionKind::Hybrid,
                              SubtractionKind::Cascade, SubtractionKind::HybridCascade})
        if (name == subtraction_name(k)) return k;
    return std::nullopt;
}

CMatrix series_sub(const CMatrix& Zc, const CMatrix& Zb) {
    same_dims(Zc, Zb, "series_sub");
    return Zc - Zb;
}

CMatrix parallel_sub(const CMatrix& Zc, const CMatrix& Zb) {
    same_dims(Zc, Zb, "parallel_sub");
    auto lu = pivot_lu(Zc - Zb, "parallel_sub");
    return -Zb * lu.solve(Zc);
}

CMatrix hybrid_sub(const CMatrix& Zc, const CMatrix& Zb, int r) {
    same_dims(Zc, Zb, "hybrid_sub");
    const int n = int(Zc.rows());
    if (r < 0 || r > n) fail(ErrorCode::InvalidArgument, "hybrid_sub: split out of range");
    if (r == n) return Zc - Zb;
    const int m = n - r;
    CMatrix c11 = block11(Zc, r), c12 = block12(Zc, r), c21 = block21(Zc, r), c22 = block22(Zc, r);
    CMatrix b11 = block11(Zb, r), b12 = block12(Zb, r), b21 = block21(Zb, r), b22 = block22(Zb, r);
    auto lu = pivot_lu(c22 - b22, "hybrid_sub");
    CMatrix d12 = c12 - b12, d21 = c21 - b21;
    CMatrix Qd21 = lu.solve(d21);
    CMatrix out(n, n);
    out.topLeftCorner(r, r) = c11 - b11 - d12 * Qd21;
    out.topRightCorner(r, m) = b12 - d12 * lu.solve(b22);
    out.bottomLeftCorner(m, r) = b21 - b22 * Qd21;
    out.bottomRightCorner(m, m) = -b22 * lu.solve(c22);
    return out;
}

CMatrix cascade_sub(const CMatrix& Zc, const CMatrix& Zb, int r) {
    if (Zc.rows() != Zc.cols() || Zb.rows() != Zb.cols()) fail(ErrorCode::DimMismatch, "cascade_sub: matrices not square");
    const int nc = int(Zc.rows()), nb = int(Zb.rows());
    if (r < 0 || r > nc) fail(ErrorCode::InvalidArgument, "cascade_sub: split out of range");
    const int t = nc - r, s = nb - t;
    if (s < 0) fail(ErrorCode::DimMismatch, "cascade_sub: second network smaller than the outer port count");
    CMatrix c11 = block11(Zc, r), c12 = block12(Zc, r), c21 = block21(Zc, r), c22 = block22(Zc, r);
    CMatrix b11 = block11(Zb, s), b12 = block12(Zb, s), b21 = block21(Zb, s), b22 = block22(Zb, s);
    auto lu = pivot_lu(c22 - b22, "cascade_sub");
    CMatrix Qc21 = lu.solve(c21), Qb21 = lu.solve(b21);
    CMatrix out(r + s, r + s);
    out.topLeftCorner(r, r) = c11 - c12 * Qc21;
    out.topRightCorner(r, s) = -c12 * Qb21;
    out.bottomLeftCorner(s, r) = -b12 * Qc21;
    out.bottomRightCorner(s, s) = -b11 - b12 * Qb21;
    return out;
}

CMatrix hybrid_cascade_sub(const CMatrix& Zc, const CMatrix& Zb, int r) {
    if (Zc.rows() != Zc.cols() || Zb.rows() != Zb.cols())
        fail(ErrorCode::DimMismatch, "hybrid_cascade_sub: matrices not square");
    if (Zc.rows() != 2 * r) fail(ErrorCode::DimMismatch, "hybrid_cascade_sub: Zc must have 2r ports");
    const int s = int(Zb.rows()) - r;
    if (s < 0) fail(ErrorCode::DimMismatch, "hybrid_cascade_sub: second network has fewer than r ports");
    CMatrix c11 = block11(Zc, r), c12 = block12(Zc, r), c21 = block21(Zc, r), c22 = block22(Zc, r);
    CMatrix b11 = block11(Zb, s), b12 = block12(Zb, s), b21 = block21(Zb, s), b22 = block22(Zb, s);
    auto lu = pivot_lu(c22 - b22, "hybrid_cascade_sub");
    CMatrix e12 = c12 - b22, e21 = c21 - b22;
    CMatrix Qe21 = lu.solve(e21), Qb21 = lu.solve(b21);
    CMatrix out(r + s, r + s);
    out.topLeftCorner(r, r) = c11 - b22 - e12 * Qe21;
    out.topRightCorner(r, s) = b21 - e12 * Qb21;
    out.bottomLeftCorner(s, r) = b12 - b12 * Qe21;
    out.bottomRightCorner(s, s) = -b11 - b12 * Qb21;
    return out;
}

CMatrix subtract(SubtractionKind kind, const CMatrix& Zc, const CMatrix& Zb, int r) {
    switch (kind) {
    case SubtractionKind::Series: return series_sub(Zc, Zb);
    case SubtractionKind::Parallel: return parallel_sub(Zc, Zb);
    case SubtractionKind::Hybrid: return hybrid_sub(Zc, Zb, r);
    case SubtractionKind::Cascade: return cascade_sub(Zc, Zb, r);
    case SubtractionKind::HybridCascade: return hybrid_cascade_sub(Zc, Zb, r);
    }
    fail(ErrorCode::InvalidArgument, "subtract: unknown kind");
}

PhaseInterval predict_subtraction_interval(const PhaseInterval& Jc, const PhaseInterval& Jb) {
    if (Jc.width() < 0 || Jb.width() < 0) fail(ErrorCode::InvalidInterval, "predict_subtraction_interval: inverted interval");
    if (intervals_overlap_mod2pi(Jc, Jb))
        fail(ErrorCode::Overlap, "predict_subtraction_interval: intervals intersect modulo 2*pi");
    std::optional<PhaseInterval> best;
    // +pi first, then -pi; further 2*pi representatives only as a fallback.
    for (double k : {0.0, 1.0, -1.0}) {
        for (double sign : {1.0, -1.0}) {
            PhaseInterval b = Jb.shifted(sign * kPi + 2.0 * kPi * k);
            PhaseInterval h{std::min(Jc.lo, b.lo), std::max(Jc.hi, b.hi)};
            if (h.width() < kPi && (!best || h.width() < best->width())) best = h;
        }
        if (best) break;
    }
    if (!best) fail(ErrorCode::NoValidSign, "predict_subtraction_interval: no sign gives a range narrower than pi");
    return *best;
}

}  // namespace portphase
