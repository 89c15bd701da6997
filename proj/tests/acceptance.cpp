// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "portphase/confluence.hpp"
#include "portphase/connections.hpp"
#include "portphase/demo.hpp"
#include "portphase/harness.hpp"
#include "portphase/io.hpp"

using namespace portphase;
namespace fs = std::filesystem;

namespace {

constexpr double kBandTol = 1e-3;

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string iv(const std::optional<PhaseInterval>& J) {
    if (!J) return "none";
    char buf[96];
    std::snprintf(buf, sizeof buf, "[%.4f, %.4f]", J->lo, J->hi);
    return buf;
}

struct BandCheck {
    bool ok = false;
    std::string text;
};

// Bounds exist, no point in the band is non-sectorial, and the bounds sit inside outer + tol.
BandCheck band_inside(const SweepResult& r, double w_lo, double w_hi, bool lo_incl, const PhaseInterval& outer) {
    auto b = r.band(w_lo, w_hi, lo_incl, true);
    int ns = r.nonsectorial_in(w_lo, w_hi, lo_incl, true);
    bool ok = b && ns == 0 && fit_shift(outer, *b, kBandTol).has_value();
    char buf[200];
    std::snprintf(buf, sizeof buf, "w in %s%g, %g]: %s vs %s, %d NS", lo_incl ? "[" : "(", w_lo, w_hi, iv(b).c_str(),
                  iv(outer).c_str(), ns);
    return {ok, buf};
}

SweepResult fig4_sweep(double gamma) {
    RationalMatrix Z = fig4_network(1.0, 1.0, 2.0, gamma);
    return sweep(Z, build_grid(Z, 1e-2, 1e3, 100.0));
}

SweepResult fig14_sweep() {
    RationalMatrix Z = demo_network_b();
    return sweep(Z, build_grid(Z, 1e-2, 1e3, 100.0));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_time(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f s", s);
    return buf;
}

std::string suite_summary(const SuiteReport& r) {
    std::string s = r.name + " " + std::to_string(r.passed) + "/" + std::to_string(r.trials);
    if (r.skipped) s += " (" + std::to_string(r.skipped) + " out of scope)";
    if (!r.notes.empty()) s += " first note: " + r.notes.front();
    return s;
}

Outcome criterion1() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    const PhaseInterval half{-kPi / 2, kPi / 2};
    auto add = [&](const std::string& label, const BandCheck& c) { o.require(c.ok, label + " " + c.text); };
    for (double g : {0.0, 1.0}) {
        SweepResult r = fig4_sweep(g);
        add("gamma=" + format_real(g), band_inside(r, 1e-2, 1e3, true, half));
        if (g == 1.0) {
            add("gamma=1", band_inside(r, 1e-2, 10.0, true, half));
            add("gamma=1", band_inside(r, 10.0, 1e3, false, {-kPi / 4, kPi / 4}));
        }
    }
    add("gamma=10", band_inside(fig4_sweep(10.0), 1e-2, 1e3, true, {-kPi, 0.0}));
    double el = seconds_since(t0);
    o.require(el < 5.0, "runtime " + fmt_time(el) + " < 5 s");
    return o;
}

Outcome criterion2() {
    Outcome o;
    SweepResult r = fig14_sweep();
    BandCheck lo = band_inside(r, 1e-2, 1e-1, true, {-kPi / 2, 0.0});
    o.require(lo.ok, lo.text);
    BandCheck hi = band_inside(r, 10.0, 1e3, true, {0.0, kPi / 2});
    o.require(hi.ok, hi.text);
    return o;
}

Outcome criterion3() {
    Outcome o;
    const PhaseInterval low{-kPi / 2, kPi / 2}, high{-kPi / 4, kPi / 2};
    // Predicted connection sectors from the bands asserted in criteria 1 and 2.
    const PhaseInterval pred_low = predict_interval({-kPi / 2, kPi / 2}, {-kPi / 2, 0.0});
    const PhaseInterval pred_high = predict_interval({-kPi / 4, kPi / 4}, {0.0, kPi / 2});
    for (ConnectionKind k : demo_connections()) {
        SweepResult r = demo_connection_sweep(k);
        BandCheck a = band_inside(r, 1e-2, 1e-1, true, low);
        bool pa = a.ok && fit_shift(pred_low, *r.band(1e-2, 1e-1), kBandTol).has_value();
        o.require(pa, std::string(connection_name(k)) + " " + a.text);
        BandCheck b = band_inside(r, 10.0, 1e3, true, high);
        bool pb = b.ok && fit_shift(pred_high, *r.band(10.0, 1e3), kBandTol).has_value();
        o.require(pb, std::string(connection_name(k)) + " " + b.text);
    }
    return o;
}

int run_cli(const std::string& args, const std::string& err_file) {
    std::string cmd = std::string("\"") + PORTPHASE_CLI + "\" " + args + " >/dev/null 2>\"" + err_file + "\"";
    int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    fs::path d = fs::temp_directory_path() / ("portphase-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

Outcome criterion4() {
    Outcome o;
    ResistiveFixture f = fig13_resistive(1, 1, 1, 1);
    CMatrix loaded = f.Za;
    loaded(1, 1) += f.RN;
    o.require(!well_defined_schur(loaded, 1), "well_defined_schur rejects [Za11 Za12; Za21 Za22+RN]");
    bool threw = false;
    try {
        cascade_load(f.Za, 1, CMatrix::Constant(1, 1, f.RN));
    } catch (const Error& e) {
        threw = e.code() == ErrorCode::IllDefined;
    }
    o.require(threw, "cascade_load raises IllDefined");
    fs::path d = scratch_dir();
    write_file((d / "za.csv").string(), matrix_to_csv(f.Za));
    write_file((d / "rn.csv").string(), matrix_to_csv(CMatrix::Constant(1, 1, f.RN)));
    int rc = run_cli("connect \"" + (d / "za.csv").string() + "\" \"" + (d / "rn.csv").string() +
                         "\" --kind cascade-load --split 1",
                     (d / "err.txt").string());
    std::string err = slurp(d / "err.txt");
    o.require(rc == 3, "CLI exit code " + std::to_string(rc) + " == 3");
    o.require(err.find("Z22+Zb singular") != std::string::npos, "CLI message mentions Z22+Zb singular");
    fs::remove_all(d);
    return o;
}

Outcome criterion5() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    SuiteOptions opt;
    opt.trials = 1000;
    SuiteReport r = check_theorem1(opt);
    double el = seconds_since(t0);
    o.require(r.ok() && r.skipped == 0, suite_summary(r));
    o.require(el < 60.0, "runtime " + fmt_time(el) + " < 60 s");
    return o;
}

Outcome criterion6() {
    Outcome o;
    SuiteOptions opt;
    opt.trials = 1000;
    SuiteReport t2 = check_theorem2(opt);
    o.require(t2.ok() && t2.skipped == 0, suite_summary(t2));
    opt.trials = 100000;
    SuiteReport p1 = check_prop1(opt), p2 = check_prop2(opt);
    o.require(p1.ok(), suite_summary(p1));
    o.require(p2.ok(), suite_summary(p2));
    return o;
}

Outcome criterion7() {
    Outcome o;
    SuiteOptions opt;
    opt.trials = 200;
    SuiteReport t3 = check_theorem3(opt);
    char buf[64];
    std::snprintf(buf, sizeof buf, " worst rel %.2e", t3.worst);
    o.require(t3.ok(), suite_summary(t3) + buf);
    opt.trials = 100;
    SuiteReport pz = check_parametrization(opt);
    std::snprintf(buf, sizeof buf, " worst rel %.2e", pz.worst);
    o.require(pz.ok(), suite_summary(pz) + buf);
    return o;
}

Outcome criterion8() {
    Outcome o;
    SuiteOptions opt;
    opt.trials = 1000;
    for (int k = 1; k <= 6; ++k) {
        SuiteReport r = check_lemma(k, opt);
        o.require(r.ok() && r.skipped == 0, suite_summary(r));
    }
    return o;
}

Outcome criterion9() {
    Outcome o;
    fs::path d = scratch_dir();
    int rc1 = run_cli("demo fig15 --out-dir \"" + (d / "a").string() + "\"", (d / "err1.txt").string());
    int rc2 = run_cli("demo fig15 --out-dir \"" + (d / "b").string() + "\"", (d / "err2.txt").string());
    o.require(rc1 == 0 && rc2 == 0, "both runs exit 0");
    int files = 0, same = 0;
    if (fs::exists(d / "a"))
        for (const auto& e : fs::directory_iterator(d / "a")) {
            ++files;
            if (fs::exists(d / "b" / e.path().filename()) && slurp(e.path()) == slurp(d / "b" / e.path().filename()))
                ++same;
        }
    o.require(files == 7, std::to_string(files) + " CSVs produced (7 expected)");
    o.require(files == same, std::to_string(same) + "/" + std::to_string(files) + " byte-identical");
    fs::remove_all(d);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    const Criterion all[] = {
        {1, "fig4 sweeps inside their phase sectors", criterion1},
        {2, "fig14 low and high bands", criterion2},
        {3, "fig15 connections inside the predicted bands", criterion3},
        {4, "resistive cascade-load rejected", criterion4},
        {5, "connection fuzz, 7 kinds x 1000", criterion5},
        {6, "subtraction fuzz and scalar checks", criterion6},
        {7, "confluence oracle and parametrization invariance", criterion7},
        {8, "lemma suite, 6 x 1000", criterion8},
        {9, "fig15 demo byte-identical across runs", criterion9},
    };
    int failed = 0;
    for (const Criterion& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failed;
        std::printf("criterion %d %s: %s (%s) [%s]\n", c.id, o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str(),
                    fmt_time(seconds_since(t0)).c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(std::size(all)) - failed, std::size(all));
    return failed ? 1 : 0;
}
