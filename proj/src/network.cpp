#include "portphase/network.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace portphase {

Poly poly_trim(Poly p) {
    while (p.size() > 1 && p.back() == 0.0) p.pop_back();
    if (p.empty()) p.push_back(0.0);
    return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return poly_trim(std::move(r));
}

Poly poly_scale(const Poly& a, double k) {
    Poly r(a);
    for (double& c : r) c *= k;
    return poly_trim(std::move(r));
}

Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_scale(b, -1.0)); }

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return poly_trim(std::move(r));
}

cplx poly_eval(const Poly& p, cplx s) {
    cplx acc = 0.0;
    for (size_t i = p.size(); i-- > 0;) acc = acc * s + p[i];
    return acc;
}

int poly_degree(const Poly& p) {
    Poly t = poly_trim(p);
    if (t.size() == 1 && t[0] == 0.0) return -1;
    return int(t.size()) - 1;
}

std::vector<cplx> poly_roots(const Poly& p) {
    Poly t = poly_trim(p);
    int d = poly_degree(t);
    if (d <= 0) return {};
    // Companion matrix of the monic polynomial.
    RMatrix comp = RMatrix::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -t[i] / t[d];
    Eigen::EigenSolver<RMatrix> es(comp, false);
    std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + d);
    return roots;
}

cplx RationalFunction::operator()(cplx s) const { return poly_eval(num, s) / poly_eval(den, s); }

RationalFunction make_rational(Poly num, Poly den) {
    num = poly_trim(std::move(num));
    den = poly_trim(std::move(den));
    if (poly_degree(den) < 0) fail(ErrorCode::InvalidArgument, "rational function with zero denominator");
    return {num, den};
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den == b.den) return make_rational(poly_add(a.num, b.num), a.den);
    return make_rational(poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)), poly_mul(a.den, b.den));
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return a + RationalFunction{poly_scale(b.num, -1.0), b.den};
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return make_rational(poly_mul(a.num, b.num), poly_mul(a.den, b.den));
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    return make_rational(poly_mul(a.num, b.den), poly_mul(a.den, b.num));
}

RationalMatrix constant_network(const CMatrix& Z) {
    if (Z.rows() != Z.cols()) fail(ErrorCode::DimMismatch, "constant_network: matrix not square");
    RationalMatrix R(int(Z.rows()));
    for (int i = 0; i < R.n; ++i)
        for (int j = 0; j < R.n; ++j) {
            if (Z(i, j).imag() != 0.0) fail(ErrorCode::InvalidArgument, "constant_network: entries must be real");
            R.at(i, j) = RationalFunction::constant(Z(i, j).real());
        }
    return R;
}

CMatrix eval(const RationalMatrix& Z, cplx s) {
    CMatrix out(Z.n, Z.n);
    for (int i = 0; i < Z.n; ++i)
        for (int j = 0; j < Z.n; ++j) {
            const RationalFunction& f = Z.at(i, j);
            cplx d = poly_eval(f.den, s);
            double scale = 0.0, mag = 1.0;
            for (double c : f.den) {
                scale += std::abs(c) * mag;
                mag *= std::abs(s);
            }
            if (std::abs(d) <= 1e-14 * scale)
                fail(ErrorCode::PoleHit, "eval: denominator vanishes at s = (" + std::to_string(s.real()) + ", " +
                                             std::to_string(s.imag()) + ")");
            out(i, j) = poly_eval(f.num, s) / d;
        }
    return out;
}

std::vector<double> imaginary_axis_poles(const RationalMatrix& Z, double dedup) {
    std::vector<double> ws;
    for (const RationalFunction& f : Z.entries) {
        if (poly_degree(f.num) < 0) continue;
        Poly den = poly_trim(f.den);
        size_t zeros = 0;
        while (zeros + 1 < den.size() && den[zeros] == 0.0) ++zeros;
        if (zeros > 0) {
            ws.push_back(0.0);
            den.erase(den.begin(), den.begin() + long(zeros));
        }
        for (cplx r : poly_roots(den)) {
            double w = std::abs(r.imag());
            if (std::abs(r.real()) <= 1e-9 * std::max(1.0, std::abs(r))) ws.push_back(w < 1e-12 ? 0.0 : w);
        }
    }
    std::sort(ws.begin(), ws.end());
    std::vector<double> out;
    for (double w : ws)
        if (out.empty() || w - out.back() > dedup * std::max(1.0, w)) out.push_back(w);
    return out;
}

FrequencyGrid build_grid(const std::vector<const RationalMatrix*>& nets, double w_lo, double w_hi,
                         double points_per_decade, double eps) {
    if (!(w_lo >= 0.0) || !(w_hi > w_lo) || !std::isfinite(w_hi) || !(points_per_decade > 0.0))
        fail(ErrorCode::InvalidRange, "build_grid: need 0 <= w_lo < w_hi and points_per_decade > 0");

    struct Sample {
        double w;
        cplx s;
        bool detour;
    };
    std::vector<Sample> samples;
    const double log_lo = w_lo > 0.0 ? std::log10(w_lo) : std::floor(std::log10(w_hi)) - 5.0;
    const double log_hi = std::log10(w_hi);
    const long n = std::max(2L, std::lround((log_hi - log_lo) * points_per_decade) + 1);
    for (long k = 0; k < n; ++k) {
        double w = k == 0 ? (w_lo > 0.0 ? w_lo : std::pow(10.0, log_lo))
                 : k == n - 1 ? w_hi
                              : std::pow(10.0, log_lo + (log_hi - log_lo) * double(k) / double(n - 1));
        samples.push_back({w, cplx(0.0, w), false});
    }
    if (w_lo == 0.0) samples.insert(samples.begin(), {0.0, cplx(0.0, 0.0), false});

    std::vector<double> poles;
    for (const RationalMatrix* Z : nets)
        for (double w : imaginary_axis_poles(*Z)) poles.push_back(w);
    std::sort(poles.begin(), poles.end());
    poles.erase(std::unique(poles.begin(), poles.end()), poles.end());

    FrequencyGrid grid;
    grid.eps = eps > 0.0 ? eps : 0.0;
    for (double wp : poles) {
        if (wp < w_lo || wp > w_hi) continue;
        const double r = eps > 0.0 ? eps : 1e-6 * std::max(1.0, wp);
        samples.erase(std::remove_if(samples.begin(), samples.end(),
                                     [&](const Sample& x) { return !x.detour && std::abs(x.w - wp) < r; }),
                      samples.end());
        for (int k = 0; k < kDetourSamples; ++k) {
            double phi;
            if (wp == 0.0)
                phi = 0.5 * kPi * double(k) / double(kDetourSamples - 1);  // quarter arc from +real axis to +j
            else
                phi = -0.5 * kPi + kPi * (double(k) + 0.5) / double(kDetourSamples);
            cplx s = cplx(0.0, wp) + r * std::polar(1.0, phi);
            samples.push_back({wp + r * std::sin(phi), s, true});
        }
    }
    std::stable_sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.w < b.w; });
    for (const Sample& x : samples) {
        grid.points.push_back(x.s);
        grid.omega.push_back(x.w);
        grid.detour.push_back(x.detour ? 1 : 0);
    }
    return grid;
}

FrequencyGrid build_grid(const RationalMatrix& Z, double w_lo, double w_hi, double points_per_decade, double eps) {
    return build_grid(std::vector<const RationalMatrix*>{&Z}, w_lo, w_hi, points_per_decade, eps);
}

int worker_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    int n = hw == 0 ? 1 : int(hw);
    if (const char* env = std::getenv("PORTPHASE_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return std::max(1, n);
}

namespace {

bool in_band(double w, double lo, double hi, bool lo_inc, bool hi_inc) {
    bool a = lo_inc ? w >= lo : w > lo;
    bool b = hi_inc ? w <= hi : w < hi;
    return a && b;
}

}  // namespace

std::optional<PhaseInterval> SweepResult::band(double w_lo, double w_hi, bool lo_inc, bool hi_inc) const {
    std::optional<PhaseInterval> out;
    for (const SweepPoint& p : points) {
        if (!p.has_phase || !in_band(p.omega, w_lo, w_hi, lo_inc, hi_inc)) continue;
        if (!out)
            out = PhaseInterval{p.lo, p.hi};
        else {
            out->lo = std::min(out->lo, p.lo);
            out->hi = std::max(out->hi, p.hi);
        }
    }
    return out;
}

int SweepResult::nonsectorial_in(double w_lo, double w_hi, bool lo_inc, bool hi_inc) const {
    int n = 0;
    for (const SweepPoint& p : points)
        if (in_band(p.omega, w_lo, w_hi, lo_inc, hi_inc) && (p.tag == SectorClass::NonSectorial || !p.note.empty()))
            ++n;
    return n;
}

SweepResult sweep_function(const FrequencyGrid& grid, const PointFunction& f, double tol) {
    SweepResult res;
    const size_t N = grid.size();
    res.points.resize(N);
    auto work = [&](size_t i) {
        SweepPoint& p = res.points[i];
        p.omega = grid.omega[i];
        p.s = grid.points[i];
        p.detour = grid.detour[i] != 0;
        try {
            PhaseReport rep = analyze(f(p.s, i), tol);
            p.tag = rep.cls.tag;
            p.margin = rep.cls.margin;
            if (!rep.phases.empty()) {
                p.has_phase = true;
                p.lo = rep.phases.back();
                p.hi = rep.phases.front();
            }
        } catch (const Error& e) {
            p.tag = SectorClass::NonSectorial;
            p.note = std::string(error_name(e.code())) + ": " + e.what();
        }
    };
    detail::parallel_for(N, work);

    // Sequential unwrapping keeps the result independent of scheduling.
    std::optional<double> prev_mid;
    for (SweepPoint& p : res.points) {
        if (!p.note.empty()) {
            ++res.failed;
            continue;
        }
        if (p.tag == SectorClass::NonSectorial) {
            ++res.nonsectorial;
            continue;
        }
        if (!p.has_phase) continue;
        if (prev_mid) {
            double k = std::round((*prev_mid - 0.5 * (p.lo + p.hi)) / (2.0 * kPi));
            p.lo += 2.0 * kPi * k;
            p.hi += 2.0 * kPi * k;
        }
        prev_mid = 0.5 * (p.lo + p.hi);
        if (!res.bounds)
            res.bounds = PhaseInterval{p.lo, p.hi};
        else {
            res.bounds->lo = std::min(res.bounds->lo, p.lo);
            res.bounds->hi = std::max(res.bounds->hi, p.hi);
        }
    }
    return res;
}

SweepResult sweep(const RationalMatrix& Z, const FrequencyGrid& grid, double tol) {
    return sweep_function(grid, [&](cplx s, size_t) { return eval(Z, s); }, tol);
}

InfinityLimit limit_at_infinity(const RationalMatrix& Z) {
    InfinityLimit out;
    out.value = CMatrix::Zero(Z.n, Z.n);
    out.growth = CMatrix::Zero(Z.n, Z.n);
    out.excess_degree.assign(size_t(Z.n) * Z.n, 0);
    for (int i = 0; i < Z.n; ++i)
        for (int j = 0; j < Z.n; ++j) {
            Poly num = poly_trim(Z.at(i, j).num), den = poly_trim(Z.at(i, j).den);
            int dn = poly_degree(num), dd = poly_degree(den);
            if (dn < dd) continue;
            double ratio = num.back() / den.back();
            if (dn == dd) {
                out.value(i, j) = ratio;
            } else {
                out.improper = true;
                out.growth(i, j) = ratio;
                out.excess_degree[size_t(i) * Z.n + j] = dn - dd;
            }
        }
    return out;
}

CMatrix probe_infinity(const RationalMatrix& Z, double w_probe) {
    InfinityLimit lim = limit_at_infinity(Z);
    if (!lim.improper) return lim.value;
    return eval(Z, cplx(0.0, w_probe));
}

RationalMatrix fig4_network(double R, double L, double C, double gamma) {
    RationalMatrix Z(2);
    Poly den{1.0, gamma * L};
    Z.at(0, 0) = make_rational({0.0, L}, den);
    Z.at(0, 1) = make_rational({0.0, L}, den);
    Z.at(1, 0) = make_rational({0.0, (1.0 - gamma * R) * L}, den);
    // (1 + gamma L s)/(C s) + L s + R, all over (1 + gamma L s)
    Z.at(1, 1) = make_rational({1.0}, {0.0, C}) + make_rational({R, L}, den);
    return Z;
}

RationalMatrix fig14_network(double R, double L, double C, double kappa, double lambda) {
    RationalMatrix Z(2);
    Poly den{0.0, C};
    Z.at(0, 0) = make_rational({1.0, R * C}, den);
    Z.at(0, 1) = make_rational({1.0, kappa * C}, den);
    Z.at(1, 0) = make_rational({1.0, -lambda * L}, den);
    Z.at(1, 1) = make_rational({1.0, -lambda * L, L * C}, den);
    return Z;
}

ResistiveFixture fig13_resistive(double R1, double R2, double R3, double R4) {
    const double S = R1 + R2 + R3 + R4;
    ResistiveFixture f;
    f.Za.resize(2, 2);
    f.Za << (R1 + R3 + R4) * R2 / S, R2 * R4 / S, R2 * R4 / S, (R1 + R2 + R3) * R4 / S;
    f.RN = -(R1 + R2 + R3) * R4 / S;
    return f;
}

}  // namespace portphase
