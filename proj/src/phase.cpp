#include "portphase/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace portphase {

namespace {

constexpr int kScanAngles = 720;
constexpr int kGoldenIters = 60;
constexpr double kTwoPi = 2.0 * kPi;

// lambda_min(cos(t) H + sin(t) K) with reusable workspace.
class SupportScan {
public:
    SupportScan(const CMatrix& H, const CMatrix& K) : H_(H), K_(K), work_(H.rows(), H.cols()), solver_(H.rows()) {}

    double operator()(double t) {
        const double c = std::cos(t), s = std::sin(t);
        if (H_.rows() == 1) return c * H_(0, 0).real() + s * K_(0, 0).real();
        work_.noalias() = c * H_ + s * K_;
        solver_.compute(work_, Eigen::EigenvaluesOnly);
        return solver_.eigenvalues()(0);
    }

private:
    const CMatrix& H_;
    const CMatrix& K_;
    CMatrix work_;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver_;
};

struct MaxSupport {
    double theta;
    double value;
};

MaxSupport maximize_support(const CMatrix& H, const CMatrix& K) {
    SupportScan f(H, K);
    const double step = kTwoPi / kScanAngles;
    int best = 0;
    double best_val = f(0.0);
    for (int i = 1; i < kScanAngles; ++i) {
        double v = f(i * step);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double a = (best - 1) * step, b = (best + 1) * step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < kGoldenIters; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    double t = 0.5 * (a + b);
    double v = f(t);
    if (best_val > v) return {best * step, best_val};
    return {t, v};
}

// Shift angles by 2*pi*k so the midpoint lands in (-pi, pi].
void canonicalize(std::vector<double>& ph) {
    if (ph.empty()) return;
    auto [mn, mx] = std::minmax_element(ph.begin(), ph.end());
    double mid = 0.5 * (*mn + *mx);
    double k = std::ceil((mid - kPi) / kTwoPi);
    if (k != 0.0)
        for (double& p : ph) p -= kTwoPi * k;
}

double wrap_pi(double a) {
    double w = std::remainder(a, kTwoPi);
    if (w <= -kPi) w += kTwoPi;
    return w;
}

}  // namespace

const char* class_name(SectorClass c) {
    switch (c) {
    case SectorClass::Sectorial: return "Sectorial";
    case SectorClass::SemiSectorial: return "SemiSectorial";
    case SectorClass::NonSectorial: return "NonSectorial";
    }
    return "?";
}

const char* class_tag(SectorClass c) {
    switch (c) {
    case SectorClass::Sectorial: return "S";
    case SectorClass::SemiSectorial: return "SS";
    case SectorClass::NonSectorial: return "NS";
    }
    return "?";
}

HermitianSplit hermitian_split(const CMatrix& C) {
    if (C.rows() != C.cols()) fail(ErrorCode::DimMismatch, "hermitian_split: matrix not square");
    CMatrix Ca = C.adjoint();
    return {(C + Ca) * 0.5, (C - Ca) * cplx(0.0, -0.5)};
}

double lambda_min_rotated(const CMatrix& H, const CMatrix& K, double theta) {
    SupportScan f(H, K);
    return f(theta);
}

Support numerical_range_support(const CMatrix& C, double theta) {
    auto [H, K] = hermitian_split(C);
    CMatrix A = std::cos(theta) * H + std::sin(theta) * K;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(A);
    return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

Classification classify(const CMatrix& C, double tol) {
    if (C.rows() != C.cols()) fail(ErrorCode::DimMismatch, "classify: matrix not square");
    Classification out;
    const double fro = C.norm();
    out.threshold = tol * fro;
    if (C.size() == 0 || fro == 0.0) {
        out.tag = SectorClass::SemiSectorial;
        return out;
    }
    auto [H, K] = hermitian_split(C);
    MaxSupport m = maximize_support(H, K);
    out.margin = m.value;
    out.theta = wrap_pi(m.theta);
    if (m.value > out.threshold) {
        out.tag = SectorClass::Sectorial;
    } else if (m.value < -out.threshold) {
        out.tag = SectorClass::NonSectorial;
    } else {
        // W(C) touches the origin. A segment through 0 (C a rotated Hermitian matrix)
        // has 0 in its relative interior when the Hermitian factor is indefinite.
        out.tag = SectorClass::SemiSectorial;
        CMatrix Ca = C.adjoint();
        cplx w = (Ca.conjugate().cwiseProduct(C)).sum() / (fro * fro);
        if (std::abs(std::abs(w) - 1.0) < 1e-8 && (C - w * Ca).norm() <= 1e-8 * fro) {
            double psi = 0.5 * std::arg(w);
            CMatrix Hr = std::exp(cplx(0.0, -psi)) * C;
            Hr = 0.5 * (Hr + Hr.adjoint()).eval();
            Eigen::SelfAdjointEigenSolver<CMatrix> es(Hr, Eigen::EigenvaluesOnly);
            const auto& ev = es.eigenvalues();
            if (ev(0) < -out.threshold && ev(ev.size() - 1) > out.threshold) out.tag = SectorClass::NonSectorial;
        }
    }
    return out;
}

namespace {

SectorialDecomposition decompose_at(const CMatrix& C, double theta) {
    const Eigen::Index n = C.rows();
    CMatrix Cr = std::exp(cplx(0.0, -theta)) * C;
    auto [H, K] = hermitian_split(Cr);
    Eigen::LLT<CMatrix> llt(H);
    if (llt.info() != Eigen::Success) fail(ErrorCode::NotSectorial, "phases: rotated Hermitian part not positive definite");
    CMatrix L = llt.matrixL();
    // G = L^{-1} K L^{-*}
    CMatrix G = llt.matrixL().solve(K);
    G = llt.matrixL().solve(G.adjoint().eval()).adjoint();
    G = 0.5 * (G + G.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(G);
    const auto& lam = es.eigenvalues();
    const CMatrix& U = es.eigenvectors();

    std::vector<double> ph(n);
    for (Eigen::Index i = 0; i < n; ++i) ph[i] = theta + std::atan(lam(i));
    std::vector<double> raw = ph;
    canonicalize(ph);

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return ph[a] > ph[b]; });

    CMatrix UtLt = U.adjoint() * L.adjoint();
    SectorialDecomposition out;
    out.T.resize(n, n);
    out.D.resize(n);
    out.phases.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index i = order[k];
        double scale = std::pow(1.0 + lam(i) * lam(i), 0.25);
        out.T.row(k) = scale * UtLt.row(i);
        out.D(k) = std::polar(1.0, raw[i]);
        out.phases[k] = ph[i];
    }
    out.center = 0.5 * (out.phases.front() + out.phases.back());
    return out;
}

}  // namespace

SectorialDecomposition phases(const CMatrix& C, double tol) {
    Classification cl = classify(C, tol);
    if (cl.tag != SectorClass::Sectorial || C.size() == 0)
        fail(ErrorCode::NotSectorial, std::string("phases: matrix is ") + class_name(cl.tag));
    return decompose_at(C, cl.theta);
}

namespace {

std::vector<double> semi_phases(const CMatrix& C, double tol) {
    const double fro = C.norm();
    if (fro == 0.0) return {};

    // Compress to the numerical range space; range(C) = range(C^*) here.
    Eigen::JacobiSVD<CMatrix> svd(C, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > tol * sv(0) * 10.0) ++r;
    CMatrix V = svd.matrixU().leftCols(r);
    CMatrix Cr = V.adjoint() * C * V;
    Classification clr = classify(Cr, tol);
    if (clr.tag == SectorClass::Sectorial) return decompose_at(Cr, clr.theta).phases;
    if (clr.tag == SectorClass::NonSectorial) fail(ErrorCode::NotSemiSectorial, "phases_semi: compression is NonSectorial");

    // Nonsingular compression with 0 on the boundary of W: Cr^{-1} Cr^* has
    // eigenvalues e^{-2j phi}, phi within pi/2 of the supporting angle.
    const double th0 = clr.theta;
    CMatrix Q = Cr.partialPivLu().solve(Cr.adjoint().eval());
    Eigen::ComplexEigenSolver<CMatrix> ces(Q, false);
    const double edge = kPi / 2 - 1e-6;
    std::vector<double> out;
    int interior_pos = 0, boundary = 0;
    for (Eigen::Index i = 0; i < r; ++i) {
        double delta = -0.5 * std::arg(ces.eigenvalues()(i) * std::polar(1.0, 2.0 * th0));
        if (std::abs(delta) > edge) {
            ++boundary;
        } else {
            if (delta > 0) ++interior_pos;
            out.push_back(th0 + delta);
        }
    }
    if (boundary > 0) {
        CMatrix Rot = std::exp(cplx(0.0, -th0)) * Cr;
        CMatrix Kp = (Rot - Rot.adjoint()) * cplx(0.0, -0.5);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(Kp, Eigen::EigenvaluesOnly);
        const double lvl = 1e-9 * std::max(1.0, Cr.norm());
        int npos = 0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()(i) > lvl) ++npos;
        int nplus = std::clamp(npos - interior_pos, 0, boundary);
        for (int i = 0; i < nplus; ++i) out.push_back(th0 + kPi / 2);
        for (int i = nplus; i < boundary; ++i) out.push_back(th0 - kPi / 2);
    }
    canonicalize(out);
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

}  // namespace

PhaseReport analyze(const CMatrix& C, double tol) {
    PhaseReport rep;
    rep.cls = classify(C, tol);
    if (rep.cls.tag == SectorClass::Sectorial)
        rep.phases = decompose_at(C, rep.cls.theta).phases;
    else if (rep.cls.tag == SectorClass::SemiSectorial)
        rep.phases = semi_phases(C, tol);
    return rep;
}

std::vector<double> phases_semi(const CMatrix& C, double tol) {
    PhaseReport rep = analyze(C, tol);
    if (rep.cls.tag == SectorClass::NonSectorial) fail(ErrorCode::NotSemiSectorial, "phases_semi: matrix is NonSectorial");
    return rep.phases;
}

CMatrix pseudo_inverse_abs(const CMatrix& C, double abs_cutoff) {
    if (C.size() == 0) return CMatrix(C.cols(), C.rows());
    Eigen::BDCSVD<CMatrix> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Eigen::VectorXd inv(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) inv(i) = sv(i) > abs_cutoff ? 1.0 / sv(i) : 0.0;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

CMatrix pseudo_inverse(const CMatrix& C, double tol) {
    if (C.size() == 0) return CMatrix(C.cols(), C.rows());
    Eigen::BDCSVD<CMatrix> svd(C);
    double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    return pseudo_inverse_abs(C, tol * smax * double(std::max(C.rows(), C.cols())));
}

CMatrix block11(const CMatrix& C, int r) { return C.topLeftCorner(r, r); }
CMatrix block12(const CMatrix& C, int r) { return C.topRightCorner(r, C.cols() - r); }
CMatrix block21(const CMatrix& C, int r) { return C.bottomLeftCorner(C.rows() - r, r); }
CMatrix block22(const CMatrix& C, int r) { return C.bottomRightCorner(C.rows() - r, C.cols() - r); }

namespace {

void check_partition(const CMatrix& C, int r, const char* who) {
    if (C.rows() != C.cols()) fail(ErrorCode::DimMismatch, std::string(who) + ": matrix not square");
    if (r < 0 || r > C.rows()) fail(ErrorCode::InvalidArgument, std::string(who) + ": split out of range");
}

// Pivot pseudo-inverse with a cutoff relative to the whole matrix, so a pivot
// that cancels to rounding noise counts as zero.
CMatrix pivot_pinv(const CMatrix& C, const CMatrix& P) {
    double scale = C.norm();
    double dim = double(std::max<Eigen::Index>(1, C.rows()));
    return pseudo_inverse_abs(P, kDefaultRankTol * dim * scale);
}

}  // namespace

bool well_defined_schur(const CMatrix& C, int r, double tol) {
    check_partition(C, r, "well_defined_schur");
    if (r == C.rows()) return true;
    CMatrix C12 = block12(C, r), C21 = block21(C, r), C22 = block22(C, r);
    CMatrix P = pivot_pinv(C, C22);
    const Eigen::Index m = C22.rows();
    CMatrix I = CMatrix::Identity(m, m);
    double res_range = ((I - C22 * P) * C21).norm();
    double res_kernel = (C12 * (I - P * C22)).norm();
    return res_range <= tol * std::max(1.0, C21.norm()) && res_kernel <= tol * std::max(1.0, C12.norm());
}

CMatrix schur_complement(const CMatrix& C, int r, double tol) {
    if (!well_defined_schur(C, r, tol))
        fail(ErrorCode::IllDefined, "schur_complement: range/kernel inclusion fails for the pivot block");
    if (r == C.rows()) return C;
    return block11(C, r) - block12(C, r) * pivot_pinv(C, block22(C, r)) * block21(C, r);
}

std::optional<PhaseInterval> phase_interval(const CMatrix& C, double tol) {
    std::vector<double> ph = phases_semi(C, tol);
    if (ph.empty()) return std::nullopt;
    return PhaseInterval{ph.back(), ph.front()};
}

std::optional<double> fit_shift(const PhaseInterval& outer, const PhaseInterval& inner, double angle_tol) {
    double k0 = std::round((outer.mid() - inner.mid()) / kTwoPi);
    for (double dk : {0.0, -1.0, 1.0}) {
        double sh = (k0 + dk) * kTwoPi;
        if (inner.lo + sh >= outer.lo - angle_tol && inner.hi + sh <= outer.hi + angle_tol) return sh;
    }
    return std::nullopt;
}

bool interval_contains(const PhaseInterval& outer, const PhaseInterval& inner, double angle_tol) {
    return fit_shift(outer, inner, angle_tol).has_value();
}

bool in_phase_set(const CMatrix& C, const PhaseInterval& J, double angle_tol, double tol) {
    auto iv = phase_interval(C, tol);
    if (!iv) return true;
    return interval_contains(J, *iv, angle_tol);
}

PhaseInterval canonical(const PhaseInterval& J) {
    double k = std::ceil((J.mid() - kPi) / kTwoPi);
    return J.shifted(-kTwoPi * k);
}

bool intervals_overlap_mod2pi(const PhaseInterval& a, const PhaseInterval& b) {
    double k0 = std::round((a.mid() - b.mid()) / kTwoPi);
    for (double dk : {-1.0, 0.0, 1.0}) {
        PhaseInterval s = b.shifted((k0 + dk) * kTwoPi);
        if (std::max(a.lo, s.lo) <= std::min(a.hi, s.hi)) return true;
    }
    return false;
}

}  // namespace portphase
