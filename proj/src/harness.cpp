#include "portphase/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>

#include "parallel.hpp"
#include "portphase/io.hpp"

namespace portphase {

double Rng::uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    double rad = std::sqrt(-2.0 * std::log(u1));
    spare_ = rad * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return rad * std::cos(2.0 * kPi * u2);
}

int Rng::integer(int lo, int hi) {
    if (hi <= lo) return lo;
    uint64_t span = uint64_t(hi - lo) + 1;
    return lo + int(uint64_t(uniform() * double(span)) % span);
}

uint64_t derive_seed(uint64_t base, uint64_t index) {
    // splitmix64 finalizer over the combined value
    uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

CMatrix random_complex(int rows, int cols, Rng& rng) {
    CMatrix M(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) M(i, j) = rng.complex_normal();
    return M;
}

RMatrix random_real(int rows, int cols, Rng& rng) {
    RMatrix M(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) M(i, j) = rng.normal();
    return M;
}

CMatrix random_nonsingular(int n, Rng& rng, double cond_limit) {
    for (;;) {
        CMatrix T = random_complex(n, n, rng);
        Eigen::JacobiSVD<CMatrix> svd(T);
        const auto& sv = svd.singularValues();
        if (sv(n - 1) > 0.0 && sv(0) / sv(n - 1) <= cond_limit) return T;
    }
}

PhaseInterval random_interval(Rng& rng, double max_width) {
    double lo = rng.uniform(-kPi, kPi);
    double w = rng.uniform(0.0, max_width);
    return {lo, lo + w};
}

CMatrix random_sectorial(int n, const PhaseInterval& J, Rng& rng, PhaseInterval* computed) {
    if (!(J.width() >= 0.0) || J.width() >= kPi)
        fail(ErrorCode::InvalidInterval, "random_sectorial: interval width must lie in [0, pi)");
    if (n < 1) fail(ErrorCode::InvalidArgument, "random_sectorial: n must be positive");
    for (int attempt = 0; attempt < 50; ++attempt) {
        CMatrix T = random_nonsingular(n, rng);
        CVector D(n);
        for (int k = 0; k < n; ++k) D(k) = std::polar(1.0, rng.uniform(J.lo, J.hi));
        CMatrix C = T.adjoint() * D.asDiagonal() * T;
        PhaseReport rep = analyze(C);
        if (rep.cls.tag != SectorClass::Sectorial) continue;
        PhaseInterval got{rep.phases.back(), rep.phases.front()};
        auto sh = fit_shift(J, got, kDefaultAngleTol);
        if (!sh) continue;
        if (computed) *computed = got.shifted(*sh);
        return C;
    }
    fail(ErrorCode::InvalidInterval, "random_sectorial: could not produce a verified sample");
}

RationalMatrix random_passive_network(int n, int order, Rng& rng) {
    // Z(s) = (Cinv + R s + L s^2) / s with Cinv, R, L positive semidefinite.
    RMatrix Rm = RMatrix::Zero(n, n), Lm = RMatrix::Zero(n, n), Cm = RMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd v = random_real(n, 1, rng);
        Rm += rng.uniform(0.1, 10.0) * v * v.transpose();
    }
    for (int k = 0; k < order; ++k) {
        Eigen::VectorXd v = random_real(n, 1, rng);
        double val = rng.uniform(0.1, 10.0);
        if (rng.uniform() < 0.5)
            Lm += val * v * v.transpose();
        else
            Cm += (1.0 / val) * v * v.transpose();
    }
    RationalMatrix Z(n);
    const bool reactive_c = Cm.norm() > 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (reactive_c)
                Z.at(i, j) = make_rational({Cm(i, j), Rm(i, j), Lm(i, j)}, {0.0, 1.0});
            else
                Z.at(i, j) = make_rational({Rm(i, j), Lm(i, j)}, {1.0});
        }
    return Z;
}

ConfluenceRep random_confluence(int n, Rng& rng) {
    const int d = rng.integer(n, 2 * n);
    RMatrix G = random_real(3 * n, d, rng);
    Eigen::HouseholderQR<RMatrix> qr(G);
    G = qr.householderQ() * RMatrix::Identity(3 * n, d);
    RMatrix ab = G.topRows(2 * n), c = G.bottomRows(n);
    Eigen::JacobiSVD<RMatrix> svd(ab, Eigen::ComputeFullU | Eigen::ComputeThinV);
    // [S T] = c ab^+ ; rows of [U W] span the left null space of ab.
    RMatrix ab_pinv = svd.matrixV() * svd.singularValues().cwiseInverse().asDiagonal() *
                      svd.matrixU().leftCols(d).transpose();
    RMatrix ST = c * ab_pinv;
    RMatrix UW = RMatrix::Zero(n, 2 * n);
    UW.topRows(2 * n - d) = svd.matrixU().rightCols(2 * n - d).transpose();
    return {ST.leftCols(n), ST.rightCols(n), UW.leftCols(n), UW.rightCols(n)};
}

namespace {

constexpr double kAngleTol = 1e-6;

enum class Outcome { Pass, Fail, Skip };

struct Trial {
    Outcome outcome = Outcome::Pass;
    double excess = -1e300;
    std::string note;
    std::vector<std::pair<std::string, CMatrix>> dumps;
    std::vector<std::pair<std::string, std::string>> text_dumps;
};

// Smallest amount by which inner sticks out of outer over 2*pi shifts (<= 0 means contained).
double excess_over(const PhaseInterval& outer, const PhaseInterval& inner) {
    double k0 = std::round((outer.mid() - inner.mid()) / (2.0 * kPi));
    double best = 1e300;
    for (double dk : {-1.0, 0.0, 1.0}) {
        PhaseInterval s = inner.shifted((k0 + dk) * 2.0 * kPi);
        best = std::min(best, std::max(outer.lo - s.lo, s.hi - outer.hi));
    }
    return best;
}

void bound_check(Trial& t, const PhaseInterval& outer, const std::optional<PhaseInterval>& inner, const char* what) {
    if (!inner) return;
    double e = excess_over(outer, *inner);
    t.excess = std::max(t.excess, e);
    if (e > kAngleTol) {
        t.outcome = Outcome::Fail;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s: [%.9f, %.9f] not within [%.9f, %.9f]", what, inner->lo, inner->hi, outer.lo,
                      outer.hi);
        t.note = buf;
    }
}

std::string sanitize(const std::string& s) {
    std::string o = s;
    for (char& c : o)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return o;
}

using TrialFn = std::function<Trial(uint64_t seed)>;

void run_trials(SuiteReport& rep, const std::string& label, int trials, uint64_t base, const TrialFn& fn,
                const SuiteOptions& opt) {
    std::vector<Trial> res(size_t(std::max(0, trials)));
    std::vector<uint64_t> seeds(res.size());
    for (size_t i = 0; i < res.size(); ++i) seeds[i] = derive_seed(base, i);
    detail::parallel_for(res.size(), [&](size_t i) {
        try {
            res[i] = fn(seeds[i]);
        } catch (const Error& e) {
            res[i].outcome = Outcome::Fail;
            res[i].note = std::string(error_name(e.code())) + ": " + e.what();
        }
    });
    long skipped_here = 0;
    std::string first_skip;
    for (size_t i = 0; i < res.size(); ++i) {
        const Trial& t = res[i];
        ++rep.trials;
        rep.worst = std::max(rep.worst, t.excess);
        if (t.outcome == Outcome::Pass) {
            ++rep.passed;
        } else if (t.outcome == Outcome::Skip) {
            ++rep.skipped;
            ++skipped_here;
            if (first_skip.empty()) first_skip = t.note;
        } else {
            rep.failing_seeds.push_back(seeds[i]);
            if (rep.notes.size() < 20) rep.notes.push_back(label + " seed " + std::to_string(seeds[i]) + ": " + t.note);
            if (!opt.dump_dir.empty()) {
                std::filesystem::create_directories(opt.dump_dir);
                std::string stem = opt.dump_dir + "/" + sanitize(rep.name + "-" + label) + "-" + std::to_string(seeds[i]);
                for (const auto& [name, M] : t.dumps) write_file(stem + "-" + name + ".csv", matrix_to_csv(M));
                for (const auto& [name, txt] : t.text_dumps) write_file(stem + "-" + name, txt);
            }
        }
    }
    if (skipped_here > 0)
        rep.notes.push_back(label + ": " + std::to_string(skipped_here) + " trial(s) out of scope, first: " + first_skip);
}

int pick_split(Rng& rng, int n) { return n == 1 ? 1 : rng.integer(1, n - 1); }

Trial invariance_trial(int which, uint64_t seed) {
    Rng rng(seed);
    Trial t;
    const int n = rng.integer(1, 6);
    PhaseInterval J = random_interval(rng, kPi - 0.1);
    PhaseInterval JC;
    CMatrix C = random_sectorial(n, J, rng, &JC);
    t.dumps.push_back({"C", C});
    switch (which) {
    case 1: {
        PhaseInterval JB;
        CMatrix B = random_sectorial(n, J, rng, &JB);
        t.dumps.push_back({"B", B});
        CMatrix S = C + B;
        PhaseReport r = analyze(S);
        if (r.cls.tag == SectorClass::NonSectorial) {
            t.outcome = Outcome::Fail;
            t.note = "sum is NonSectorial";
            return t;
        }
        if (!r.phases.empty()) bound_check(t, J, PhaseInterval{r.phases.back(), r.phases.front()}, "sum");
        break;
    }
    case 2: {
        std::vector<double> ph = phases(C).phases;
        std::vector<double> pi = phases(pseudo_inverse(C)).phases;
        // phases(C^+) = -reverse(phases(C)) up to a common 2*pi shift
        double k = std::round((pi[0] + ph[n - 1]) / (2.0 * kPi));
        double worst = 0.0;
        for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(pi[size_t(i)] + ph[size_t(n - 1 - i)] - 2.0 * kPi * k));
        t.excess = worst - kAngleTol;
        if (worst > kAngleTol) {
            t.outcome = Outcome::Fail;
            t.note = "pseudo-inverse phases differ from negated reversed phases by " + format_real(worst);
        }
        Trial b;
        bound_check(b, PhaseInterval{-J.hi, -J.lo}, PhaseInterval{pi.back(), pi.front()}, "pseudo-inverse");
        if (b.outcome == Outcome::Fail) {
            t.outcome = Outcome::Fail;
            t.note = b.note;
        }
        t.excess = std::max(t.excess, b.excess);
        break;
    }
    case 3: {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (rng.uniform() < 0.5) idx.push_back(i);
        if (idx.empty()) idx.push_back(rng.integer(0, n - 1));
        CMatrix P(idx.size(), idx.size());
        for (size_t a = 0; a < idx.size(); ++a)
            for (size_t b = 0; b < idx.size(); ++b) P(Eigen::Index(a), Eigen::Index(b)) = C(idx[a], idx[b]);
        bound_check(t, JC, phase_interval(P), "principal submatrix");
        break;
    }
    case 4: {
        CMatrix P = random_nonsingular(n, rng);
        t.dumps.push_back({"P", P});
        auto got = phase_interval(P.adjoint() * C * P);
        if (!got) {
            t.outcome = Outcome::Fail;
            t.note = "congruence produced a zero matrix";
            return t;
        }
        auto sh = fit_shift(JC, *got, 1.0);
        PhaseInterval g = sh ? got->shifted(*sh) : *got;
        double e = std::max(std::abs(g.lo - JC.lo), std::abs(g.hi - JC.hi));
        t.excess = e - kAngleTol;
        if (!sh || e > kAngleTol) {
            t.outcome = Outcome::Fail;
            t.note = "congruent matrix has different phase interval (max deviation " + format_real(e) + ")";
        }
        break;
    }
    case 5: {
        int r = rng.integer(1, n);
        bound_check(t, JC, phase_interval(schur_complement(C, r)), "Schur complement");
        break;
    }
    case 6: {
        int k = rng.integer(1, n);
        CMatrix Jm;
        for (;;) {
            Jm = random_complex(k, n, rng);
            Eigen::JacobiSVD<CMatrix> svd(Jm);
            const auto& sv = svd.singularValues();
            if (sv(k - 1) > 1e-4 * sv(0)) break;
        }
        t.dumps.push_back({"J", Jm});
        bound_check(t, JC, phase_interval(Jm * C * Jm.adjoint()), "compression");
        break;
    }
    default: fail(ErrorCode::InvalidArgument, "check_lemma: lemma index must be 1..6");
    }
    return t;
}

struct ConnectionCase {
    CMatrix Za, Zb;
    int r = 1;
    PhaseInterval J, Ja, Jb;
    bool uses_b = true;
};

ConnectionCase connection_case(ConnectionKind kind, Rng& rng) {
    ConnectionCase c;
    const bool two_blocks = kind == ConnectionKind::Cascade || kind == ConnectionKind::HybridCascade ||
                            kind == ConnectionKind::CascadeLoad;
    const int n = rng.integer(two_blocks ? 2 : 1, 6);
    c.J = random_interval(rng, kPi - 0.1);
    int nb = n;
    switch (kind) {
    case ConnectionKind::Shorted:
    case ConnectionKind::Open:
        c.r = pick_split(rng, n);
        c.uses_b = false;
        break;
    case ConnectionKind::Series:
    case ConnectionKind::Parallel: break;
    case ConnectionKind::Hybrid: c.r = rng.integer(0, n); break;
    case ConnectionKind::Cascade: {
        c.r = rng.integer(1, n - 1);
        nb = (n - c.r) + rng.integer(1, 3);
        break;
    }
    case ConnectionKind::CascadeLoad:
        c.r = rng.integer(1, n - 1);
        nb = n - c.r;
        break;
    case ConnectionKind::HybridCascade:
        c.r = rng.integer(1, n - 1);
        nb = n;
        break;
    }
    c.Za = random_sectorial(n, c.J, rng, &c.Ja);
    if (c.uses_b)
        c.Zb = random_sectorial(nb, c.J, rng, &c.Jb);
    else
        c.Jb = c.Ja;
    return c;
}

Trial connection_trial(ConnectionKind kind, uint64_t seed) {
    Rng rng(seed);
    Trial t;
    ConnectionCase c = connection_case(kind, rng);
    t.dumps.push_back({"Za", c.Za});
    if (c.uses_b) t.dumps.push_back({"Zb", c.Zb});
    CMatrix Zc;
    try {
        Zc = connect(kind, c.Za, c.Zb, c.r);
    } catch (const Error& e) {
        t.outcome = Outcome::Fail;
        t.note = std::string(error_name(e.code())) + ": " + e.what();
        return t;
    }
    PhaseReport r = analyze(Zc);
    if (r.cls.tag == SectorClass::NonSectorial) {
        t.outcome = Outcome::Skip;
        t.note = "result NonSectorial (r=" + std::to_string(c.r) + ")";
        return t;
    }
    if (r.phases.empty()) return t;
    PhaseInterval got{r.phases.back(), r.phases.front()};
    bound_check(t, c.J, got, "result vs drawn interval");
    if (t.outcome == Outcome::Pass) bound_check(t, predict_interval(c.Ja, c.Jb), got, "result vs predicted hull");
    return t;
}

Trial subtraction_trial(SubtractionKind kind, uint64_t seed) {
    Rng rng(seed);
    Trial t;
    for (int attempt = 0; attempt < 50; ++attempt) {
        PhaseInterval Jb = random_interval(rng, kPi - 0.1), Jc = random_interval(rng, kPi - 0.1);
        if (intervals_overlap_mod2pi(Jb, Jc)) continue;
        PhaseInterval pred;
        try {
            pred = predict_subtraction_interval(Jc, Jb);
        } catch (const Error&) {
            continue;
        }
        int nc = 1, nb = 1, r = 0;
        switch (kind) {
        case SubtractionKind::Series:
        case SubtractionKind::Parallel: nc = nb = rng.integer(1, 6); break;
        case SubtractionKind::Hybrid:
            nc = nb = rng.integer(1, 6);
            r = rng.integer(0, nc);
            break;
        case SubtractionKind::Cascade: {
            r = rng.integer(1, 3);
            int tt = rng.integer(1, 3);
            nc = r + tt;
            nb = 2 * tt;  // s = t
            break;
        }
        case SubtractionKind::HybridCascade:
            r = rng.integer(1, 3);
            nc = nb = 2 * r;  // s = r
            break;
        }
        PhaseInterval Jba, Jca;
        CMatrix Zb = random_sectorial(nb, Jb, rng, &Jba);
        CMatrix Zc = random_sectorial(nc, Jc, rng, &Jca);
        CMatrix Zx;
        try {
            Zx = subtract(kind, Zc, Zb, r);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::SingularPivot) continue;
            throw;
        }
        t.dumps = {{"Zb", Zb}, {"Zc", Zc}};
        PhaseReport rep = analyze(Zx);
        if (rep.cls.tag == SectorClass::NonSectorial) {
            t.outcome = Outcome::Fail;
            t.note = "Zx is NonSectorial";
            return t;
        }
        if (rep.phases.empty()) return t;
        PhaseInterval got{rep.phases.back(), rep.phases.front()};
        bound_check(t, pred, got, "Zx vs prediction from drawn intervals");
        if (t.outcome == Outcome::Pass)
            bound_check(t, predict_subtraction_interval(Jca, Jba), got, "Zx vs prediction from computed intervals");
        return t;
    }
    t.outcome = Outcome::Skip;
    t.note = "no well-posed sample in 50 attempts";
    return t;
}

double rel_err(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return 1e300;
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

struct OracleCase {
    ConfluenceRep rep;
    CMatrix Za, Zb, direct;
};

OracleCase oracle_case(const std::string& name, Rng& rng) {
    OracleCase c;
    PhaseInterval J = random_interval(rng, kPi - 0.1);
    if (name == "series" || name == "parallel") {
        int n = rng.integer(1, 4);
        c.rep = name == "series" ? series_rep(n) : parallel_rep(n);
        c.Za = random_sectorial(n, J, rng);
        c.Zb = random_sectorial(n, J, rng);
        c.direct = name == "series" ? series(c.Za, c.Zb) : parallel(c.Za, c.Zb);
    } else if (name == "hybrid") {
        int n = rng.integer(1, 4), r = rng.integer(0, n);
        c.rep = hybrid_rep(n, r);
        c.Za = random_sectorial(n, J, rng);
        c.Zb = random_sectorial(n, J, rng);
        c.direct = hybrid(c.Za, c.Zb, r);
    } else if (name == "cascade") {
        int r = rng.integer(1, 3), s = rng.integer(1, 3), tt = rng.integer(1, 3);
        c.rep = cascade_rep(r, s, tt);
        c.Za = random_sectorial(r + s, J, rng);
        c.Zb = random_sectorial(s + tt, J, rng);
        c.direct = cascade(c.Za, c.Zb, r);
    } else if (name == "hybrid-cascade") {
        int r = rng.integer(1, 3), s = rng.integer(1, 3);
        c.rep = hybrid_cascade_rep(r, s);
        c.Za = random_sectorial(r + s, J, rng);
        c.Zb = random_sectorial(s + r, J, rng);
        c.direct = hybrid_cascade(c.Za, c.Zb, r);
    } else {
        fail(ErrorCode::InvalidArgument, "unknown representation '" + name + "'");
    }
    return c;
}

Trial oracle_trial(const std::string& name, uint64_t seed) {
    Rng rng(seed);
    Trial t;
    OracleCase c = oracle_case(name, rng);
    t.dumps = {{"Za", c.Za}, {"Zb", c.Zb}};
    t.text_dumps = {{"rep.json", confluence_to_json(c.rep)}};
    CMatrix viaM = general_connect(dual(c.rep), c.Za, c.Zb);
    double e = rel_err(viaM, c.direct);
    t.excess = e;
    if (e > 1e-8) {
        t.outcome = Outcome::Fail;
        t.note = "general_connect differs from the direct formula, relative error " + format_real(e);
    }
    return t;
}

Trial parametrization_trial(uint64_t seed) {
    Rng rng(seed);
    Trial t;
    static const char* names[] = {"series", "parallel", "hybrid", "cascade", "hybrid-cascade"};
    ConfluenceRep rep;
    CMatrix Za, Zb;
    if (rng.uniform() < 0.5) {
        OracleCase c = oracle_case(names[rng.integer(0, 4)], rng);
        rep = c.rep;
        Za = c.Za;
        Zb = c.Zb;
    } else {
        int n = rng.integer(1, 4);
        rep = random_confluence(n, rng);
        PhaseInterval J = random_interval(rng, kPi - 0.1);
        Za = random_sectorial(n, J, rng);
        Zb = random_sectorial(n, J, rng);
    }
    DualRep d = dual(rep);
    const int m = int(d.Xi.rows()), nc = d.nc();
    RMatrix Gamma = random_real(nc, m, rng);
    RMatrix Lambda;
    for (;;) {
        Lambda = random_real(m, m, rng);
        if (m == 0) break;
        Eigen::JacobiSVD<RMatrix> svd(Lambda);
        const auto& sv = svd.singularValues();
        if (sv(m - 1) > 0.0 && sv(0) / sv(m - 1) <= 100.0) break;
    }
    t.dumps = {{"Za", Za}, {"Zb", Zb}};
    t.text_dumps = {{"dual.json", dual_to_json(d)}};
    CMatrix base = general_connect(d, Za, Zb);
    CMatrix moved = general_connect(parametrize_dual(d, Gamma, Lambda), Za, Zb);
    double e = rel_err(moved, base);
    t.excess = e;
    if (e > 1e-9) {
        t.outcome = Outcome::Fail;
        t.note = "parametrized dual changes M/22, relative error " + format_real(e);
    }
    return t;
}

Trial existence_trial(uint64_t seed) {
    Rng rng(seed);
    Trial t;
    const int n = rng.integer(1, 4);
    ConfluenceRep rep = random_confluence(n, rng);
    t.text_dumps = {{"rep.json", confluence_to_json(rep)}};
    ConfluenceDiagnostics dg = validate(rep);
    if (!dg.ok() || !dg.dimension_law) {
        t.outcome = Outcome::Fail;
        t.note = "generated confluence invalid: " + dg.message;
        return t;
    }
    PhaseInterval J = random_interval(rng, kPi - 0.1);
    CMatrix Za = random_sectorial(n, J, rng), Zb = random_sectorial(n, J, rng);
    t.dumps = {{"Za", Za}, {"Zb", Zb}};
    CMatrix Zc = general_connect(dual(rep), Za, Zb);
    PhaseReport r = analyze(Zc);
    if (r.cls.tag == SectorClass::NonSectorial) {
        t.outcome = Outcome::Skip;
        t.note = "result NonSectorial";
        return t;
    }
    if (!r.phases.empty()) bound_check(t, J, PhaseInterval{r.phases.back(), r.phases.front()}, "general connection");
    return t;
}

Trial prop1_trial(uint64_t seed) {
    Rng rng(seed);
    Trial t;
    double ta = rng.uniform(-kPi, kPi), tb = ta + rng.uniform(-kPi, kPi);
    cplx z = std::polar(rng.uniform(0.01, 10.0), ta) + std::polar(rng.uniform(0.01, 10.0), tb);
    if (std::abs(z) < 1e-12) {
        t.outcome = Outcome::Skip;
        t.note = "sum vanishes";
        return t;
    }
    double th = std::arg(z);
    PhaseInterval J{std::min(ta, tb), std::max(ta, tb)};
    double e = excess_over(J, PhaseInterval{th, th});
    t.excess = e;
    if (e > 1e-9) {
        t.outcome = Outcome::Fail;
        t.note = "arg(za+zb) outside [min, max] by " + format_real(e);
    }
    return t;
}

Trial prop2_trial(uint64_t seed) {
    Rng rng(seed);
    Trial t;
    double tb = rng.uniform(-kPi, kPi), d = rng.uniform(-2.0 * kPi, 2.0 * kPi), tc = tb + d;
    cplx z = std::polar(rng.uniform(0.01, 10.0), tc) - std::polar(rng.uniform(0.01, 10.0), tb);
    if (std::abs(z) < 1e-12) {
        t.outcome = Outcome::Skip;
        t.note = "difference vanishes";
        return t;
    }
    double shifted = d >= 0.0 ? tb + kPi : tb - kPi;
    PhaseInterval J{std::min(tc, shifted), std::max(tc, shifted)};
    double th = std::arg(z);
    double e = excess_over(J, PhaseInterval{th, th});
    t.excess = e;
    if (e > 1e-9) {
        t.outcome = Outcome::Fail;
        t.note = "arg(zc-zb) outside the predicted range by " + format_real(e);
    }
    return t;
}

}  // namespace

std::string format_report(const SuiteReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "suite %s: %ld trials, %ld passed, %ld failed, %ld out of scope, worst excess %.6e\n",
                  r.name.c_str(), r.trials, r.passed, r.failed(), r.skipped, r.trials ? r.worst : 0.0);
    std::string s = buf;
    for (const std::string& n : r.notes) s += "  note: " + n + "\n";
    if (!r.failing_seeds.empty()) {
        s += "  failing seeds:";
        for (size_t i = 0; i < r.failing_seeds.size() && i < 50; ++i) s += " " + std::to_string(r.failing_seeds[i]);
        if (r.failing_seeds.size() > 50) s += " ...";
        s += "\n";
    }
    return s;
}

SuiteReport check_lemma(int which, const SuiteOptions& opt) {
    if (which < 1 || which > 6) fail(ErrorCode::InvalidArgument, "check_lemma: lemma index must be 1..6");
    SuiteReport rep;
    rep.name = "lemma" + std::to_string(which);
    run_trials(rep, rep.name, opt.trials, derive_seed(opt.seed, uint64_t(which)),
               [which](uint64_t s) { return invariance_trial(which, s); }, opt);
    return rep;
}

SuiteReport check_prop1(const SuiteOptions& opt) {
    SuiteReport rep;
    rep.name = "prop1";
    run_trials(rep, rep.name, opt.trials, derive_seed(opt.seed, 101), prop1_trial, opt);
    return rep;
}

SuiteReport check_prop2(const SuiteOptions& opt) {
    SuiteReport rep;
    rep.name = "prop2";
    run_trials(rep, rep.name, opt.trials, derive_seed(opt.seed, 102), prop2_trial, opt);
    return rep;
}

std::vector<ConnectionKind> theorem1_kinds() {
    return {ConnectionKind::Shorted, ConnectionKind::Open,    ConnectionKind::Series,       ConnectionKind::Parallel,
            ConnectionKind::Hybrid,  ConnectionKind::Cascade, ConnectionKind::HybridCascade};
}

std::vector<SubtractionKind> all_subtractions() {
    return {SubtractionKind::Series, SubtractionKind::Parallel, SubtractionKind::Hybrid, SubtractionKind::Cascade,
            SubtractionKind::HybridCascade};
}

SuiteReport check_theorem1(const SuiteOptions& opt, const std::vector<ConnectionKind>& kinds) {
    SuiteReport rep;
    rep.name = "theorem1";
    for (ConnectionKind k : kinds.empty() ? theorem1_kinds() : kinds)
        run_trials(rep, connection_name(k), opt.trials, derive_seed(opt.seed, 200 + uint64_t(k)),
                   [k](uint64_t s) { return connection_trial(k, s); }, opt);
    return rep;
}

SuiteReport check_theorem2(const SuiteOptions& opt, const std::vector<SubtractionKind>& kinds) {
    SuiteReport rep;
    rep.name = "theorem2";
    for (SubtractionKind k : kinds.empty() ? all_subtractions() : kinds)
        run_trials(rep, subtraction_name(k), opt.trials, derive_seed(opt.seed, 300 + uint64_t(k)),
                   [k](uint64_t s) { return subtraction_trial(k, s); }, opt);
    return rep;
}

SuiteReport check_theorem3(const SuiteOptions& opt, const std::vector<std::string>& reps) {
    SuiteReport rep;
    rep.name = "theorem3";
    std::vector<std::string> names = reps;
    if (names.empty()) names = {"series", "parallel", "hybrid", "cascade", "hybrid-cascade"};
    uint64_t idx = 400;
    for (const std::string& nm : names)
        run_trials(rep, nm, opt.trials, derive_seed(opt.seed, idx++), [nm](uint64_t s) { return oracle_trial(nm, s); },
                   opt);
    return rep;
}

SuiteReport check_parametrization(const SuiteOptions& opt) {
    SuiteReport rep;
    rep.name = "parametrization";
    run_trials(rep, rep.name, opt.trials, derive_seed(opt.seed, 500), parametrization_trial, opt);
    return rep;
}

SuiteReport check_theorem4(const SuiteOptions& opt) {
    SuiteReport rep;
    rep.name = "theorem4";
    run_trials(rep, rep.name, opt.trials, derive_seed(opt.seed, 600), existence_trial, opt);
    return rep;
}

std::vector<std::string> suite_names() {
    return {"lemma1", "lemma2", "lemma3",   "lemma4",   "lemma5",   "lemma6",          "prop1",
            "prop2",  "theorem1", "theorem2", "theorem3", "theorem4", "parametrization"};
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& opt) {
    if (name.size() == 6 && name.rfind("lemma", 0) == 0 && name[5] >= '1' && name[5] <= '6')
        return check_lemma(name[5] - '0', opt);
    if (name == "prop1") return check_prop1(opt);
    if (name == "prop2") return check_prop2(opt);
    if (name == "theorem1") return check_theorem1(opt);
    if (name == "theorem2") return check_theorem2(opt);
    if (name == "theorem3") return check_theorem3(opt);
    if (name == "theorem4") return check_theorem4(opt);
    if (name == "parametrization") return check_parametrization(opt);
    fail(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");
}

}  // namespace portphase
