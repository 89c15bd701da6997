#include "portphase/portphase.h"

#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include "portphase/confluence.hpp"
#include "portphase/connections.hpp"
#include "portphase/demo.hpp"
#include "portphase/harness.hpp"
#include "portphase/io.hpp"
#include "portphase/subtractions.hpp"

struct pp_matrix {
    portphase::CMatrix m;
};
struct pp_network {
    portphase::RationalMatrix z;
};
struct pp_sweep {
    portphase::SweepResult r;
};
struct pp_confluence {
    portphase::ConfluenceRep rep;
};
struct pp_dual {
    portphase::DualRep d;
};

namespace {

using namespace portphase;

thread_local std::string g_last_error;
thread_local std::string g_last_report;

pp_status set_error(pp_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

// Runs body, mapping exceptions to status codes and recording the message.
template <class F>
pp_status guarded(F&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const Error& e) {
        return set_error(static_cast<pp_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(PP_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(PP_INTERNAL, e.what());
    }
}

pp_status put_text(const std::string& text, char* buf, size_t cap, size_t* needed) {
    const size_t need = text.size() + 1;
    if (needed) *needed = need;
    if (!buf) return needed ? PP_OK : set_error(PP_INVALID_ARGUMENT, "buffer and size pointer are both NULL");
    if (cap < need) return set_error(PP_BUFFER_TOO_SMALL, "buffer too small");
    std::memcpy(buf, text.c_str(), need);
    return PP_OK;
}

#define PP_REQUIRE(cond, msg) \
    do {                      \
        if (!(cond)) return set_error(PP_INVALID_ARGUMENT, msg); \
    } while (0)

FrequencyGrid grid_from(const std::vector<const RationalMatrix*>& nets, const pp_grid_options* opt) {
    pp_grid_options o = opt ? *opt : pp_grid_defaults();
    return build_grid(nets, o.w_lo, o.w_hi, o.points_per_decade, o.eps);
}

}  // namespace

extern "C" {

const char* pp_last_error(void) { return g_last_error.c_str(); }

const char* pp_status_name(pp_status status) {
    switch (status) {
    case PP_OK: return "Ok";
    case PP_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case PP_INTERNAL: return "Internal";
    default:
        if (status >= 1 && status <= 17) return error_name(static_cast<ErrorCode>(status));
        return "Unknown";
    }
}

const char* pp_version(void) { return "1.0.0"; }

pp_status pp_matrix_create(size_t rows, size_t cols, const double* re, const double* im, pp_matrix** out) {
    PP_REQUIRE(out && (re || rows * cols == 0), "pp_matrix_create: NULL argument");
    return guarded([&] {
        auto* h = new pp_matrix{CMatrix(Eigen::Index(rows), Eigen::Index(cols))};
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j)
                h->m(Eigen::Index(i), Eigen::Index(j)) = cplx(re[i * cols + j], im ? im[i * cols + j] : 0.0);
        *out = h;
        return PP_OK;
    });
}

pp_status pp_matrix_parse(const char* csv, size_t index, pp_matrix** out) {
    PP_REQUIRE(csv && out, "pp_matrix_parse: NULL argument");
    return guarded([&] {
        auto ms = parse_matrices(csv);
        if (index >= ms.size())
            fail(ErrorCode::Parse, "matrix " + std::to_string(index) + " not present (found " + std::to_string(ms.size()) + ")");
        *out = new pp_matrix{ms[index]};
        return PP_OK;
    });
}

pp_status pp_matrix_count(const char* csv, size_t* count) {
    PP_REQUIRE(csv && count, "pp_matrix_count: NULL argument");
    return guarded([&] {
        *count = parse_matrices(csv).size();
        return PP_OK;
    });
}

pp_status pp_matrix_read(const char* path, size_t index, pp_matrix** out) {
    PP_REQUIRE(path && out, "pp_matrix_read: NULL argument");
    return guarded([&] {
        std::string text = read_file(path);
        return pp_matrix_parse(text.c_str(), index, out);
    });
}

void pp_matrix_free(pp_matrix* m) { delete m; }
size_t pp_matrix_rows(const pp_matrix* m) { return m ? size_t(m->m.rows()) : 0; }
size_t pp_matrix_cols(const pp_matrix* m) { return m ? size_t(m->m.cols()) : 0; }

pp_status pp_matrix_get(const pp_matrix* m, size_t i, size_t j, double* re, double* im) {
    PP_REQUIRE(m, "pp_matrix_get: NULL matrix");
    PP_REQUIRE(i < size_t(m->m.rows()) && j < size_t(m->m.cols()), "pp_matrix_get: index out of range");
    cplx z = m->m(Eigen::Index(i), Eigen::Index(j));
    if (re) *re = z.real();
    if (im) *im = z.imag();
    return PP_OK;
}

pp_status pp_matrix_to_csv(const pp_matrix* m, char* buf, size_t cap, size_t* needed) {
    PP_REQUIRE(m, "pp_matrix_to_csv: NULL matrix");
    return guarded([&] { return put_text(matrix_to_csv(m->m), buf, cap, needed); });
}

pp_status pp_analyze(const pp_matrix* m, double tol, pp_sector_class* cls, double* margin, double* phases, size_t cap,
                     size_t* count) {
    PP_REQUIRE(m, "pp_analyze: NULL matrix");
    return guarded([&] {
        PhaseReport r = analyze(m->m, tol > 0.0 ? tol : kDefaultSectorTol);
        if (cls) *cls = static_cast<pp_sector_class>(r.cls.tag);
        if (margin) *margin = r.cls.margin;
        if (count) *count = r.phases.size();
        if (phases) {
            if (cap < r.phases.size()) return set_error(PP_BUFFER_TOO_SMALL, "phase buffer too small");
            std::copy(r.phases.begin(), r.phases.end(), phases);
        }
        return PP_OK;
    });
}

pp_status pp_phase_interval(const pp_matrix* m, double* lo, double* hi, int* has_phases) {
    PP_REQUIRE(m, "pp_phase_interval: NULL matrix");
    return guarded([&] {
        auto J = phase_interval(m->m);
        if (has_phases) *has_phases = J ? 1 : 0;
        if (lo) *lo = J ? J->lo : 0.0;
        if (hi) *hi = J ? J->hi : 0.0;
        return PP_OK;
    });
}

pp_status pp_schur_complement(const pp_matrix* m, int r, pp_matrix** out) {
    PP_REQUIRE(m && out, "pp_schur_complement: NULL argument");
    return guarded([&] {
        *out = new pp_matrix{schur_complement(m->m, r)};
        return PP_OK;
    });
}

pp_status pp_well_defined_schur(const pp_matrix* m, int r, int* ok) {
    PP_REQUIRE(m && ok, "pp_well_defined_schur: NULL argument");
    return guarded([&] {
        *ok = well_defined_schur(m->m, r) ? 1 : 0;
        return PP_OK;
    });
}

pp_status pp_connect(const char* kind, const pp_matrix* a, const pp_matrix* b, int r, pp_matrix** out) {
    PP_REQUIRE(kind && a && out, "pp_connect: NULL argument");
    return guarded([&] {
        auto k = parse_connection(kind);
        if (!k) fail(ErrorCode::InvalidArgument, std::string("unknown connection kind '") + kind + "'");
        bool needs_b = *k != ConnectionKind::Shorted && *k != ConnectionKind::Open;
        if (needs_b && !b) fail(ErrorCode::InvalidArgument, std::string(kind) + " needs a second matrix");
        *out = new pp_matrix{connect(*k, a->m, b ? b->m : CMatrix(), r)};
        return PP_OK;
    });
}

pp_status pp_subtract(const char* kind, const pp_matrix* c, const pp_matrix* b, int r, pp_matrix** out) {
    PP_REQUIRE(kind && c && b && out, "pp_subtract: NULL argument");
    return guarded([&] {
        auto k = parse_subtraction(kind);
        if (!k) fail(ErrorCode::InvalidArgument, std::string("unknown subtraction kind '") + kind + "'");
        *out = new pp_matrix{subtract(*k, c->m, b->m, r)};
        return PP_OK;
    });
}

pp_status pp_predict_connection(double a_lo, double a_hi, double b_lo, double b_hi, double* lo, double* hi) {
    PP_REQUIRE(lo && hi, "pp_predict_connection: NULL argument");
    return guarded([&] {
        PhaseInterval J = predict_interval({a_lo, a_hi}, {b_lo, b_hi});
        *lo = J.lo;
        *hi = J.hi;
        return PP_OK;
    });
}

pp_status pp_predict_subtraction(double c_lo, double c_hi, double b_lo, double b_hi, double* lo, double* hi) {
    PP_REQUIRE(lo && hi, "pp_predict_subtraction: NULL argument");
    return guarded([&] {
        PhaseInterval J = predict_subtraction_interval({c_lo, c_hi}, {b_lo, b_hi});
        *lo = J.lo;
        *hi = J.hi;
        return PP_OK;
    });
}

pp_status pp_network_parse(const char* json, pp_network** out) {
    PP_REQUIRE(json && out, "pp_network_parse: NULL argument");
    return guarded([&] {
        *out = new pp_network{parse_network_json(json)};
        return PP_OK;
    });
}

pp_status pp_network_read(const char* path, pp_network** out) {
    PP_REQUIRE(path && out, "pp_network_read: NULL argument");
    return guarded([&] {
        *out = new pp_network{parse_network_json(read_file(path))};
        return PP_OK;
    });
}

pp_status pp_network_fixture(const char* name, const double* params, size_t nparams, pp_network** out) {
    PP_REQUIRE(name && out && (params || nparams == 0), "pp_network_fixture: NULL argument");
    return guarded([&] {
        std::string nm = name;
        if (nm == "fig4") {
            if (nparams != 4) fail(ErrorCode::InvalidArgument, "fig4 takes R, L, C, gamma");
            *out = new pp_network{fig4_network(params[0], params[1], params[2], params[3])};
        } else if (nm == "fig14") {
            if (nparams != 5) fail(ErrorCode::InvalidArgument, "fig14 takes R, L, C, kappa, lambda");
            *out = new pp_network{fig14_network(params[0], params[1], params[2], params[3], params[4])};
        } else {
            fail(ErrorCode::InvalidArgument, "unknown fixture '" + nm + "'");
        }
        return PP_OK;
    });
}

void pp_network_free(pp_network* n) { delete n; }
size_t pp_network_ports(const pp_network* n) { return n ? size_t(n->z.n) : 0; }

pp_status pp_network_eval(const pp_network* n, double s_re, double s_im, pp_matrix** out) {
    PP_REQUIRE(n && out, "pp_network_eval: NULL argument");
    return guarded([&] {
        *out = new pp_matrix{eval(n->z, cplx(s_re, s_im))};
        return PP_OK;
    });
}

pp_status pp_network_to_json(const pp_network* n, char* buf, size_t cap, size_t* needed) {
    PP_REQUIRE(n, "pp_network_to_json: NULL network");
    return guarded([&] { return put_text(network_to_json(n->z), buf, cap, needed); });
}

pp_grid_options pp_grid_defaults(void) { return {kDemoOmegaLo, kDemoOmegaHi, kDemoPointsPerDecade, 0.0}; }

pp_status pp_sweep_network(const pp_network* n, const pp_grid_options* opt, pp_sweep** out) {
    PP_REQUIRE(n && out, "pp_sweep_network: NULL argument");
    return guarded([&] {
        FrequencyGrid g = grid_from({&n->z}, opt);
        *out = new pp_sweep{sweep(n->z, g)};
        return PP_OK;
    });
}

pp_status pp_sweep_connection(const char* kind, const pp_network* a, const pp_network* b, int r,
                              const pp_grid_options* opt, pp_sweep** out) {
    PP_REQUIRE(kind && a && b && out, "pp_sweep_connection: NULL argument");
    return guarded([&] {
        auto k = parse_connection(kind);
        if (!k) fail(ErrorCode::InvalidArgument, std::string("unknown connection kind '") + kind + "'");
        FrequencyGrid g = grid_from({&a->z, &b->z}, opt);
        *out = new pp_sweep{connect_sweep(*k, a->z, b->z, r, g)};
        return PP_OK;
    });
}

void pp_sweep_free(pp_sweep* s) { delete s; }
size_t pp_sweep_size(const pp_sweep* s) { return s ? s->r.points.size() : 0; }

pp_status pp_sweep_band(const pp_sweep* s, double w_lo, double w_hi, double* lo, double* hi, int* has_bounds,
                        int* nonsectorial) {
    PP_REQUIRE(s, "pp_sweep_band: NULL sweep");
    return guarded([&] {
        auto b = s->r.band(w_lo, w_hi);
        if (has_bounds) *has_bounds = b ? 1 : 0;
        if (lo) *lo = b ? b->lo : 0.0;
        if (hi) *hi = b ? b->hi : 0.0;
        if (nonsectorial) *nonsectorial = s->r.nonsectorial_in(w_lo, w_hi);
        return PP_OK;
    });
}

pp_status pp_sweep_to_csv(const pp_sweep* s, char* buf, size_t cap, size_t* needed) {
    PP_REQUIRE(s, "pp_sweep_to_csv: NULL sweep");
    return guarded([&] { return put_text(sweep_to_csv(s->r), buf, cap, needed); });
}

pp_status pp_confluence_parse(const char* json, pp_confluence** out) {
    PP_REQUIRE(json && out, "pp_confluence_parse: NULL argument");
    return guarded([&] {
        *out = new pp_confluence{parse_confluence_json(json)};
        return PP_OK;
    });
}

pp_status pp_confluence_read(const char* path, pp_confluence** out) {
    PP_REQUIRE(path && out, "pp_confluence_read: NULL argument");
    return guarded([&] {
        *out = new pp_confluence{parse_confluence_json(read_file(path))};
        return PP_OK;
    });
}

pp_status pp_confluence_builtin(const char* name, pp_confluence** out) {
    PP_REQUIRE(name && out, "pp_confluence_builtin: NULL argument");
    return guarded([&] {
        *out = new pp_confluence{builtin_rep(name)};
        return PP_OK;
    });
}

void pp_confluence_free(pp_confluence* c) { delete c; }

pp_status pp_confluence_to_json(const pp_confluence* c, char* buf, size_t cap, size_t* needed) {
    PP_REQUIRE(c, "pp_confluence_to_json: NULL confluence");
    return guarded([&] { return put_text(confluence_to_json(c->rep), buf, cap, needed); });
}

pp_status pp_confluence_validate(const pp_confluence* c, int* ok, char* buf, size_t cap, size_t* needed) {
    PP_REQUIRE(c, "pp_confluence_validate: NULL confluence");
    return guarded([&] {
        ConfluenceDiagnostics d = validate(c->rep);
        if (ok) *ok = d.ok() ? 1 : 0;
        std::string text = std::string("shapes: ") + (d.shapes_ok ? "pass" : "fail") + "\n" +
                           "axiom1 (no c without a, b): " + (d.axiom1 ? "pass" : "fail") + "\n" +
                           "axiom2 (every c reached): " + (d.axiom2 ? "pass" : "fail") + "\n" +
                           "dim G: " + std::to_string(d.dim) + "\n" +
                           "dimension law: " + (d.dimension_law ? "pass" : "fail") + "\n";
        if (!d.message.empty()) text += "message: " + d.message + "\n";
        return put_text(text, buf, cap, needed);
    });
}

pp_status pp_confluence_dual(const pp_confluence* c, pp_dual** out) {
    PP_REQUIRE(c && out, "pp_confluence_dual: NULL argument");
    return guarded([&] {
        *out = new pp_dual{dual(c->rep)};
        return PP_OK;
    });
}

pp_status pp_dual_parse(const char* json, pp_dual** out) {
    PP_REQUIRE(json && out, "pp_dual_parse: NULL argument");
    return guarded([&] {
        *out = new pp_dual{parse_dual_json(json)};
        return PP_OK;
    });
}

pp_status pp_dual_read(const char* path, pp_dual** out) {
    PP_REQUIRE(path && out, "pp_dual_read: NULL argument");
    return guarded([&] {
        *out = new pp_dual{parse_dual_json(read_file(path))};
        return PP_OK;
    });
}

void pp_dual_free(pp_dual* d) { delete d; }

pp_status pp_dual_to_json(const pp_dual* d, char* buf, size_t cap, size_t* needed) {
    PP_REQUIRE(d, "pp_dual_to_json: NULL dual");
    return guarded([&] { return put_text(dual_to_json(d->d), buf, cap, needed); });
}

pp_status pp_general_connect(const pp_dual* d, const pp_matrix* a, const pp_matrix* b, pp_matrix** out) {
    PP_REQUIRE(d && a && b && out, "pp_general_connect: NULL argument");
    return guarded([&] {
        *out = new pp_matrix{general_connect(d->d, a->m, b->m)};
        return PP_OK;
    });
}

pp_status pp_last_report(char* buf, size_t cap, size_t* needed) { return put_text(g_last_report, buf, cap, needed); }

pp_status pp_demo(const char* figure, const char* out_dir) {
    PP_REQUIRE(figure && out_dir, "pp_demo: NULL argument");
    return guarded([&] {
        g_last_report.clear();
        auto files = demo_files(figure);
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) fail(ErrorCode::Io, std::string("cannot create '") + out_dir + "': " + ec.message());
        for (const auto& [name, content] : files) {
            std::string path = (std::filesystem::path(out_dir) / name).string();
            write_file(path, content);
            g_last_report += path + "\n";
        }
        return PP_OK;
    });
}

pp_status pp_verify(const char* suite, int trials, uint64_t seed, const char* dump_dir, int* passed) {
    PP_REQUIRE(suite && passed, "pp_verify: NULL argument");
    PP_REQUIRE(trials >= 0, "pp_verify: trials must be non-negative");
    return guarded([&] {
        g_last_report.clear();
        SuiteOptions opt;
        opt.trials = trials;
        opt.seed = seed;
        if (dump_dir) opt.dump_dir = dump_dir;
        std::vector<std::string> names;
        if (std::string(suite) == "all")
            names = suite_names();
        else
            names.push_back(suite);
        bool ok = true;
        for (const std::string& nm : names) {
            SuiteReport r = run_suite(nm, opt);
            ok = ok && r.ok();
            g_last_report += format_report(r);
        }
        *passed = ok ? 1 : 0;
        return PP_OK;
    });
}

pp_status pp_suite_names(char* buf, size_t cap, size_t* needed) {
    std::string s;
    for (const std::string& n : suite_names()) s += n + "\n";
    return put_text(s, buf, cap, needed);
}

}  // extern "C"
