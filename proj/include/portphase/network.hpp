#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "portphase/phase.hpp"

namespace portphase {

// Real polynomial, ascending powers of s.
using Poly = std::vector<double>;

Poly poly_trim(Poly p);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, double k);
cplx poly_eval(const Poly& p, cplx s);
int poly_degree(const Poly& p);  // -1 for the zero polynomial
std::vector<cplx> poly_roots(const Poly& p);

struct RationalFunction {
    Poly num{0.0};
    Poly den{1.0};

    static RationalFunction constant(double c) { return {{c}, {1.0}}; }
    cplx operator()(cplx s) const;
};

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
RationalFunction make_rational(Poly num, Poly den);

struct RationalMatrix {
    int n = 0;
    std::vector<RationalFunction> entries;  // row-major n*n

    RationalMatrix() = default;
    explicit RationalMatrix(int n_) : n(n_), entries(size_t(n_) * n_, RationalFunction::constant(0.0)) {}
    RationalFunction& at(int i, int j) { return entries[size_t(i) * n + j]; }
    const RationalFunction& at(int i, int j) const { return entries[size_t(i) * n + j]; }
};

RationalMatrix constant_network(const CMatrix& Z);  // real part only; Z must be real

CMatrix eval(const RationalMatrix& Z, cplx s);
std::vector<double> imaginary_axis_poles(const RationalMatrix& Z, double dedup = 1e-9);

struct FrequencyGrid {
    std::vector<cplx> points;
    std::vector<double> omega;
    std::vector<char> detour;
    double eps = 0.0;  // base indentation radius (0 means per-pole default)

    size_t size() const { return points.size(); }
};

inline constexpr int kDetourSamples = 16;

// Log-spaced j*omega samples with semicircular detours around j-axis poles of any
// of the given networks. eps <= 0 selects 1e-6 * max(1, omega_p) per pole.
FrequencyGrid build_grid(const std::vector<const RationalMatrix*>& nets, double w_lo, double w_hi,
                         double points_per_decade, double eps = 0.0);
FrequencyGrid build_grid(const RationalMatrix& Z, double w_lo, double w_hi, double points_per_decade,
                         double eps = 0.0);

struct SweepPoint {
    double omega = 0.0;
    cplx s;
    bool detour = false;
    SectorClass tag = SectorClass::NonSectorial;
    bool has_phase = false;  // false for NS, zero matrices, or failed evaluation
    double lo = 0.0;         // unwrapped along the grid
    double hi = 0.0;
    double margin = 0.0;
    std::string note;  // evaluation failure reason, if any
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::optional<PhaseInterval> bounds;
    int nonsectorial = 0;
    int failed = 0;

    // Bounds restricted to w_lo <= omega <= w_hi (inclusive flags select the ends).
    std::optional<PhaseInterval> band(double w_lo, double w_hi, bool lo_inclusive = true, bool hi_inclusive = true) const;
    int nonsectorial_in(double w_lo, double w_hi, bool lo_inclusive = true, bool hi_inclusive = true) const;
};

// Evaluates a matrix-valued function over a grid, in parallel, with deterministic aggregation.
using PointFunction = std::function<CMatrix(cplx s, size_t index)>;
SweepResult sweep_function(const FrequencyGrid& grid, const PointFunction& f, double tol = kDefaultSectorTol);
SweepResult sweep(const RationalMatrix& Z, const FrequencyGrid& grid, double tol = kDefaultSectorTol);

int worker_threads();  // PORTPHASE_THREADS caps hardware concurrency

struct InfinityLimit {
    bool improper = false;
    CMatrix value;    // entrywise limit; improper entries hold 0
    CMatrix growth;   // leading coefficient ratio of improper entries (value ~ growth * (j omega)^k)
    std::vector<int> excess_degree;  // row-major deg(num) - deg(den), clipped at 0
};

InfinityLimit limit_at_infinity(const RationalMatrix& Z);
// Matrix used for bounds at omega = infinity: the limit when proper, else Z(j*w_probe).
CMatrix probe_infinity(const RationalMatrix& Z, double w_probe);

RationalMatrix fig4_network(double R, double L, double C, double gamma);
RationalMatrix fig14_network(double R, double L, double C, double kappa, double lambda);
struct ResistiveFixture {
    CMatrix Za;
    double RN = 0.0;
};
ResistiveFixture fig13_resistive(double R1, double R2, double R3, double R4);

}  // namespace portphase
