// Command-line front end over the portphase C API.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "portphase/portphase.h"

namespace {

constexpr double kPi = 3.14159265358979323846;

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kIllDefined = 3, kVerifyFailed = 4 };

bool g_degrees = false;

struct CliError {
    pp_status status;
    std::string message;
};

void check(pp_status s) {
    if (s != PP_OK) throw CliError{s, pp_last_error()};
}

int exit_code(pp_status s) {
    switch (s) {
    case PP_PARSE:
    case PP_IO:
    case PP_INVALID_ARGUMENT:
    case PP_DIM_MISMATCH: return kParse;
    case PP_ILL_DEFINED:
    case PP_NOT_EXISTS:
    case PP_SINGULAR_PIVOT:
    case PP_POLE_HIT: return kIllDefined;
    default: return kFailure;
    }
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using Matrix = std::unique_ptr<pp_matrix, Deleter<pp_matrix, pp_matrix_free>>;
using Network = std::unique_ptr<pp_network, Deleter<pp_network, pp_network_free>>;
using Sweep = std::unique_ptr<pp_sweep, Deleter<pp_sweep, pp_sweep_free>>;
using Confluence = std::unique_ptr<pp_confluence, Deleter<pp_confluence, pp_confluence_free>>;
using Dual = std::unique_ptr<pp_dual, Deleter<pp_dual, pp_dual_free>>;

// Two-call text retrieval.
template <class F>
std::string fetch(F&& f) {
    size_t need = 0;
    check(f(nullptr, 0, &need));
    std::string s(need, '\0');
    check(f(s.data(), s.size(), &need));
    s.resize(need ? need - 1 : 0);
    return s;
}

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (x == 0.0) return "0";
    char buf[64];
    for (int p = 1; p <= 12; ++p) {
        std::snprintf(buf, sizeof buf, "%.*g", p, x);
        if (std::strtod(buf, nullptr) == x) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string angle(double rad) { return fmt(g_degrees ? rad * 180.0 / kPi : rad); }

std::string interval(double lo, double hi) { return "[" + angle(lo) + ", " + angle(hi) + "]"; }

const char* class_label(pp_sector_class c) {
    switch (c) {
    case PP_SECTORIAL: return "Sectorial";
    case PP_SEMI_SECTORIAL: return "SemiSectorial";
    default: return "NonSectorial";
    }
}

Matrix read_matrix(const std::string& path, size_t index = 0) {
    pp_matrix* m = nullptr;
    check(pp_matrix_read(path.c_str(), index, &m));
    return Matrix(m);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        char* end = nullptr;
        double x = std::strtod(item.c_str(), &end);
        if (item.empty() || *end != '\0') throw CliError{PP_PARSE, "bad number '" + item + "' in list"};
        v.push_back(x);
    }
    return v;
}

// "fig4:1,1,2,1" or a JSON file path.
Network load_network(const std::string& source) {
    pp_network* n = nullptr;
    auto colon = source.find(':');
    std::string head = source.substr(0, colon);
    if (colon != std::string::npos && (head == "fig4" || head == "fig14")) {
        std::vector<double> p = parse_list(source.substr(colon + 1));
        check(pp_network_fixture(head.c_str(), p.data(), p.size(), &n));
    } else {
        check(pp_network_read(source.c_str(), &n));
    }
    return Network(n);
}

void print_matrix(const pp_matrix* m) {
    std::fputs(fetch([&](char* b, size_t c, size_t* n) { return pp_matrix_to_csv(m, b, c, n); }).c_str(), stdout);
}

// Phase interval of a matrix as a comment line, or why there is none.
std::string interval_line(const char* label, const pp_matrix* m, double* lo = nullptr, double* hi = nullptr) {
    double l = 0, h = 0;
    int has = 0;
    pp_status s = pp_phase_interval(m, &l, &h, &has);
    if (s != PP_OK) return std::string("# ") + label + ": " + pp_status_name(s);
    if (!has) return std::string("# ") + label + ": no phases (zero matrix)";
    if (lo) *lo = l;
    if (hi) *hi = h;
    return std::string("# ") + label + ": " + interval(l, h);
}

void write_or_print(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    FILE* f = std::fopen(out.c_str(), "wb");
    if (!f) throw CliError{PP_IO, "cannot write '" + out + "'"};
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
}

void print_sweep_summary(const pp_sweep* s, double w_lo, double w_hi) {
    double lo = 0, hi = 0;
    int has = 0, ns = 0;
    check(pp_sweep_band(s, w_lo, w_hi, &lo, &hi, &has, &ns));
    std::fprintf(stderr, "points: %zu, non-sectorial: %d, bounds: %s\n", pp_sweep_size(s), ns,
                 has ? interval(lo, hi).c_str() : "none");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase analysis of multi-port networks and their connections"};
    app.require_subcommand(1);
    uint64_t seed = 1;
    app.add_flag("--degrees", g_degrees, "Display angles in degrees (files stay in radians)");
    app.add_option("--seed", seed, "Seed for randomized commands");

    // phase
    auto* phase = app.add_subcommand("phase", "Phases and class of each matrix in a CSV file");
    std::string phase_file;
    double phase_tol = 0.0;
    phase->add_option("matrix", phase_file, "CSV matrix file")->required();
    phase->add_option("--tol", phase_tol, "Relative classification tolerance");

    // sweep
    auto* sw = app.add_subcommand("sweep", "Frequency sweep of a network's phases");
    std::string sw_net, sw_out;
    pp_grid_options grid = pp_grid_defaults();
    sw->add_option("network", sw_net, "Network JSON file, or fig4:R,L,C,gamma / fig14:R,L,C,kappa,lambda")->required();
    auto add_grid = [&](CLI::App* c) {
        c->add_option("--wmin", grid.w_lo, "Lowest frequency (0 allowed)");
        c->add_option("--wmax", grid.w_hi, "Highest frequency");
        c->add_option("--ppd", grid.points_per_decade, "Points per decade");
        c->add_option("--eps", grid.eps, "Detour radius around imaginary-axis poles");
    };
    add_grid(sw);
    sw->add_option("--out", sw_out, "CSV output path (stdout if omitted)");

    // connect
    auto* con = app.add_subcommand("connect", "Connect two matrices or networks");
    std::string con_a, con_b, con_kind = "series", con_out;
    int con_split = 1;
    double con_freq = 0.0;
    bool con_sweep = false;
    con->add_option("a", con_a, "First matrix CSV (or network with --freq/--sweep)")->required();
    con->add_option("b", con_b, "Second matrix CSV or network (unused by shorted and open)");
    con->add_option("--kind", con_kind, "shorted, open, series, parallel, hybrid, cascade, cascade-load, hybrid-cascade");
    con->add_option("--split", con_split, "Port split r");
    auto* freq_opt = con->add_option("--freq", con_freq, "Evaluate networks at s = j*freq");
    con->add_flag("--sweep", con_sweep, "Sweep the connected networks over frequency")->excludes(freq_opt);
    add_grid(con);
    con->add_option("--out", con_out, "CSV output path for --sweep");

    // subtract
    auto* sub = app.add_subcommand("subtract", "Recover Zx from Zc and Zb");
    std::string sub_c, sub_b, sub_kind = "series";
    int sub_split = 1;
    bool sub_predict = false;
    sub->add_option("c", sub_c, "Connected matrix CSV")->required();
    sub->add_option("b", sub_b, "Known matrix CSV")->required();
    sub->add_option("--kind", sub_kind, "series, parallel, hybrid, cascade, hybrid-cascade");
    sub->add_option("--split", sub_split, "Port split r");
    sub->add_flag("--predict", sub_predict, "Also print the predicted phase interval of Zx");

    // confluence
    auto* cf = app.add_subcommand("confluence", "Confluence operations");
    std::string cf_file, cf_builtin;
    bool cf_dual = false, cf_validate = false, cf_is_dual = false;
    std::vector<std::string> cf_connect;
    cf->add_option("rep", cf_file, "Confluence JSON file");
    cf->add_option("--builtin", cf_builtin, "series:N, parallel:N, hybrid:N:R, cascade:R:S:T, hybrid-cascade:R:S, new");
    cf->add_flag("--from-dual", cf_is_dual, "The file holds a dual representation");
    cf->add_flag("--dual", cf_dual, "Print the dual representation");
    cf->add_flag("--validate", cf_validate, "Check the confluence axioms");
    cf->add_option("--connect", cf_connect, "Connect two matrix CSV files through the confluence")->expected(2);

    // demo
    auto* demo = app.add_subcommand("demo", "Write figure reproduction CSVs");
    std::string demo_fig, demo_dir = ".";
    demo->add_option("figure", demo_fig, "fig5 or fig15")->required()->check(CLI::IsMember({"fig5", "fig15"}));
    demo->add_option("--out-dir", demo_dir, "Output directory");

    // verify
    auto* ver = app.add_subcommand("verify", "Run randomized property suites");
    std::string ver_suite = "all", ver_dump;
    int ver_trials = 1000;
    ver->add_option("--suite", ver_suite, "Suite name or 'all'");
    ver->add_option("--trials", ver_trials, "Trials per suite (per kind where applicable)");
    ver->add_option("--seed", seed, "Base seed");
    ver->add_option("--dump-dir", ver_dump, "Directory for failing cases");
    ver->add_flag_callback("--list", [] {
        std::fputs(fetch([](char* b, size_t c, size_t* n) { return pp_suite_names(b, c, n); }).c_str(), stdout);
        std::exit(0);
    }, "List suite names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kParse;
    }

    try {
        if (phase->parsed()) {
            size_t count = 0;
            std::string text;
            {
                FILE* f = std::fopen(phase_file.c_str(), "rb");
                if (!f) throw CliError{PP_IO, "cannot open '" + phase_file + "'"};
                char buf[4096];
                for (size_t n; (n = std::fread(buf, 1, sizeof buf, f)) > 0;) text.append(buf, n);
                std::fclose(f);
            }
            check(pp_matrix_count(text.c_str(), &count));
            if (count == 0) throw CliError{PP_PARSE, "no matrix in '" + phase_file + "'"};
            for (size_t k = 0; k < count; ++k) {
                pp_matrix* raw = nullptr;
                check(pp_matrix_parse(text.c_str(), k, &raw));
                Matrix m(raw);
                pp_sector_class cls;
                size_t n = 0;
                check(pp_analyze(m.get(), phase_tol, &cls, nullptr, nullptr, 0, &n));
                std::vector<double> ph(n);
                check(pp_analyze(m.get(), phase_tol, &cls, nullptr, ph.data(), ph.size(), &n));
                std::string line;
                for (size_t i = 0; i < n; ++i) line += (i ? " " : "") + angle(ph[i]);
                std::printf("%s%s%s\n", line.c_str(), line.empty() ? "" : ", ", class_label(cls));
            }
            return kOk;
        }
        if (sw->parsed()) {
            Network n = load_network(sw_net);
            pp_sweep* raw = nullptr;
            check(pp_sweep_network(n.get(), &grid, &raw));
            Sweep s(raw);
            write_or_print(fetch([&](char* b, size_t c, size_t* k) { return pp_sweep_to_csv(s.get(), b, c, k); }), sw_out);
            print_sweep_summary(s.get(), grid.w_lo, grid.w_hi);
            return kOk;
        }
        if (con->parsed()) {
            bool needs_b = con_kind != "shorted" && con_kind != "open";
            if (needs_b && con_b.empty()) throw CliError{PP_INVALID_ARGUMENT, con_kind + " needs a second operand"};
            if (con_sweep) {
                Network a = load_network(con_a);
                Network b = load_network(needs_b ? con_b : con_a);
                pp_sweep* raw = nullptr;
                check(pp_sweep_connection(con_kind.c_str(), a.get(), b.get(), con_split, &grid, &raw));
                Sweep s(raw);
                write_or_print(fetch([&](char* bf, size_t c, size_t* k) { return pp_sweep_to_csv(s.get(), bf, c, k); }),
                               con_out);
                print_sweep_summary(s.get(), grid.w_lo, grid.w_hi);
                return kOk;
            }
            Matrix a, b;
            if (freq_opt->count() > 0) {
                pp_matrix* ra = nullptr;
                pp_matrix* rb = nullptr;
                Network na = load_network(con_a);
                check(pp_network_eval(na.get(), 0.0, con_freq, &ra));
                a.reset(ra);
                if (needs_b) {
                    Network nb = load_network(con_b);
                    check(pp_network_eval(nb.get(), 0.0, con_freq, &rb));
                    b.reset(rb);
                }
            } else {
                a = read_matrix(con_a);
                if (needs_b) b = read_matrix(con_b);
            }
            pp_matrix* raw = nullptr;
            check(pp_connect(con_kind.c_str(), a.get(), b.get(), con_split, &raw));
            Matrix c(raw);
            print_matrix(c.get());
            std::puts(interval_line("phase interval", c.get()).c_str());
            return kOk;
        }
        if (sub->parsed()) {
            Matrix c = read_matrix(sub_c), b = read_matrix(sub_b);
            pp_matrix* raw = nullptr;
            check(pp_subtract(sub_kind.c_str(), c.get(), b.get(), sub_split, &raw));
            Matrix x(raw);
            print_matrix(x.get());
            std::puts(interval_line("phase interval", x.get()).c_str());
            if (sub_predict) {
                double clo = NAN, chi = NAN, blo = NAN, bhi = NAN;
                std::puts(interval_line("Zc interval", c.get(), &clo, &chi).c_str());
                std::puts(interval_line("Zb interval", b.get(), &blo, &bhi).c_str());
                double lo = 0, hi = 0;
                pp_status s = std::isnan(clo) || std::isnan(blo)
                                  ? PP_NOT_SEMI_SECTORIAL
                                  : pp_predict_subtraction(clo, chi, blo, bhi, &lo, &hi);
                if (s == PP_OK)
                    std::printf("# predicted: %s\n", interval(lo, hi).c_str());
                else
                    std::printf("# predicted: none (%s)\n", pp_status_name(s));
            }
            return kOk;
        }
        if (cf->parsed()) {
            if (cf_file.empty() == cf_builtin.empty())
                throw CliError{PP_INVALID_ARGUMENT, "give exactly one of a confluence file or --builtin"};
            Confluence rep;
            Dual d;
            if (cf_is_dual) {
                if (cf_file.empty()) throw CliError{PP_INVALID_ARGUMENT, "--from-dual needs a file"};
                pp_dual* rd = nullptr;
                check(pp_dual_read(cf_file.c_str(), &rd));
                d.reset(rd);
            } else {
                pp_confluence* rc = nullptr;
                check(cf_file.empty() ? pp_confluence_builtin(cf_builtin.c_str(), &rc)
                                      : pp_confluence_read(cf_file.c_str(), &rc));
                rep.reset(rc);
            }
            int rc_exit = kOk;
            bool any = false;
            if (cf_validate) {
                any = true;
                if (!rep) throw CliError{PP_INVALID_ARGUMENT, "--validate needs a primal representation"};
                int ok = 0;
                std::fputs(fetch([&](char* b, size_t c, size_t* n) {
                               return pp_confluence_validate(rep.get(), &ok, b, c, n);
                           }).c_str(),
                           stdout);
                if (!ok) rc_exit = kVerifyFailed;
            }
            auto need_dual = [&] {
                if (!d) {
                    pp_dual* rd = nullptr;
                    check(pp_confluence_dual(rep.get(), &rd));
                    d.reset(rd);
                }
            };
            if (cf_dual) {
                any = true;
                need_dual();
                std::fputs(fetch([&](char* b, size_t c, size_t* n) { return pp_dual_to_json(d.get(), b, c, n); }).c_str(),
                           stdout);
            }
            if (!cf_connect.empty()) {
                any = true;
                need_dual();
                Matrix a = read_matrix(cf_connect[0]), b = read_matrix(cf_connect[1]);
                pp_matrix* raw = nullptr;
                check(pp_general_connect(d.get(), a.get(), b.get(), &raw));
                Matrix c(raw);
                print_matrix(c.get());
                std::puts(interval_line("phase interval", c.get()).c_str());
            }
            if (!any && rep)
                std::fputs(fetch([&](char* b, size_t c, size_t* n) { return pp_confluence_to_json(rep.get(), b, c, n); })
                               .c_str(),
                           stdout);
            return rc_exit;
        }
        if (demo->parsed()) {
            check(pp_demo(demo_fig.c_str(), demo_dir.c_str()));
            std::fputs(fetch([](char* b, size_t c, size_t* n) { return pp_last_report(b, c, n); }).c_str(), stdout);
            return kOk;
        }
        if (ver->parsed()) {
            int passed = 0;
            check(pp_verify(ver_suite.c_str(), ver_trials, seed, ver_dump.empty() ? nullptr : ver_dump.c_str(), &passed));
            std::fputs(fetch([](char* b, size_t c, size_t* n) { return pp_last_report(b, c, n); }).c_str(), stdout);
            return passed ? kOk : kVerifyFailed;
        }
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s: %s\n", pp_status_name(e.status), e.message.c_str());
        return exit_code(e.status);
    }
    return kOk;
}
