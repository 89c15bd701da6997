#pragma once

#include <optional>
#include <vector>

#include "portphase/core.hpp"

namespace portphase {

enum class SectorClass { Sectorial, SemiSectorial, NonSectorial };

const char* class_name(SectorClass c);
const char* class_tag(SectorClass c);  // S, SS, NS

struct Classification {
    SectorClass tag = SectorClass::NonSectorial;
    double margin = 0.0;     // max over theta of lambda_min(H(e^{-j theta} C))
    double theta = 0.0;      // maximizing rotation angle
    double threshold = 0.0;  // absolute level used for the decision
};

struct HermitianSplit {
    CMatrix H;
    CMatrix K;
};

struct Support {
    double lambda_min = 0.0;
    CVector witness;
};

// C = T^* D T with D = diag(e^{j phi_k}); phases sorted descending.
struct SectorialDecomposition {
    CMatrix T;
    CVector D;
    double center = 0.0;
    std::vector<double> phases;
};

// Closed interval of angles [lo, hi], 0 <= hi - lo <= pi.
struct PhaseInterval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    PhaseInterval shifted(double by) const { return {lo + by, hi + by}; }
};

// Relative tolerances. The classification threshold is rel * ||C||_F.
inline constexpr double kDefaultSectorTol = 1e-9;
inline constexpr double kDefaultRankTol = 1e-12;
inline constexpr double kDefaultSchurTol = 1e-9;
inline constexpr double kDefaultAngleTol = 1e-6;

// Classification plus phases (empty for NonSectorial and for the zero matrix).
struct PhaseReport {
    Classification cls;
    std::vector<double> phases;
};
PhaseReport analyze(const CMatrix& C, double tol = kDefaultSectorTol);

HermitianSplit hermitian_split(const CMatrix& C);
Support numerical_range_support(const CMatrix& C, double theta);
double lambda_min_rotated(const CMatrix& H, const CMatrix& K, double theta);

Classification classify(const CMatrix& C, double tol = kDefaultSectorTol);
SectorialDecomposition phases(const CMatrix& C, double tol = kDefaultSectorTol);
std::vector<double> phases_semi(const CMatrix& C, double tol = kDefaultSectorTol);

CMatrix pseudo_inverse(const CMatrix& C, double tol = kDefaultRankTol);
// Singular values at or below abs_cutoff are dropped.
CMatrix pseudo_inverse_abs(const CMatrix& C, double abs_cutoff);

bool well_defined_schur(const CMatrix& C, int r, double tol = kDefaultSchurTol);
CMatrix schur_complement(const CMatrix& C, int r, double tol = kDefaultSchurTol);

// Empty optional for a zero matrix (no phases). Throws NotSemiSectorial.
std::optional<PhaseInterval> phase_interval(const CMatrix& C, double tol = kDefaultSectorTol);
bool in_phase_set(const CMatrix& C, const PhaseInterval& J, double angle_tol = kDefaultAngleTol,
                  double tol = kDefaultSectorTol);

// Shift of inner by a multiple of 2*pi placing it inside outer widened by angle_tol, if any.
std::optional<double> fit_shift(const PhaseInterval& outer, const PhaseInterval& inner, double angle_tol);
bool interval_contains(const PhaseInterval& outer, const PhaseInterval& inner, double angle_tol);
// Representative with midpoint in (-pi, pi].
PhaseInterval canonical(const PhaseInterval& J);
bool intervals_overlap_mod2pi(const PhaseInterval& a, const PhaseInterval& b);

CMatrix block11(const CMatrix& C, int r);
CMatrix block12(const CMatrix& C, int r);
CMatrix block21(const CMatrix& C, int r);
CMatrix block22(const CMatrix& C, int r);

}  // namespace portphase
