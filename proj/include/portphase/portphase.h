#ifndef PORTPHASE_H
#define PORTPHASE_H

#include <stddef.h>
#include <stdint.h>

#if defined(PORTPHASE_BUILDING)
#define PP_API __attribute__((visibility("default")))
#else
#define PP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values 1..17 mirror the library error kinds. */
typedef enum pp_status {
    PP_OK = 0,
    PP_INVALID_ARGUMENT = 1,
    PP_DIM_MISMATCH = 2,
    PP_NOT_SECTORIAL = 3,
    PP_NOT_SEMI_SECTORIAL = 4,
    PP_ILL_DEFINED = 5,
    PP_SINGULAR_PIVOT = 6,
    PP_POLE_HIT = 7,
    PP_INVALID_RANGE = 8,
    PP_HULL_TOO_WIDE = 9,
    PP_OVERLAP = 10,
    PP_NO_VALID_SIGN = 11,
    PP_INVALID_CONFLUENCE = 12,
    PP_RANK_DEFICIENT_PARAMETER = 13,
    PP_NOT_EXISTS = 14,
    PP_INVALID_INTERVAL = 15,
    PP_PARSE = 16,
    PP_IO = 17,
    PP_BUFFER_TOO_SMALL = 64,
    PP_INTERNAL = 99
} pp_status;

typedef enum pp_sector_class { PP_SECTORIAL = 0, PP_SEMI_SECTORIAL = 1, PP_NON_SECTORIAL = 2 } pp_sector_class;

typedef struct pp_matrix pp_matrix;
typedef struct pp_network pp_network;
typedef struct pp_sweep pp_sweep;
typedef struct pp_confluence pp_confluence;
typedef struct pp_dual pp_dual;

/* Message of the last failing call on this thread ("" if none). */
PP_API const char* pp_last_error(void);
PP_API const char* pp_status_name(pp_status status);
PP_API const char* pp_version(void);

/*
 * Functions producing text take (buf, cap, needed). needed receives the size
 * including the terminating NUL. With buf == NULL or cap < needed nothing is
 * written and PP_BUFFER_TOO_SMALL is returned (PP_OK when buf is NULL and only
 * the size was asked for).
 */

/* Matrices: complex, row-major input arrays; im may be NULL. */
PP_API pp_status pp_matrix_create(size_t rows, size_t cols, const double* re, const double* im, pp_matrix** out);
/* index selects among blank-line separated matrices in CSV text. */
PP_API pp_status pp_matrix_parse(const char* csv, size_t index, pp_matrix** out);
PP_API pp_status pp_matrix_count(const char* csv, size_t* count);
PP_API pp_status pp_matrix_read(const char* path, size_t index, pp_matrix** out);
PP_API void pp_matrix_free(pp_matrix* m);
PP_API size_t pp_matrix_rows(const pp_matrix* m);
PP_API size_t pp_matrix_cols(const pp_matrix* m);
PP_API pp_status pp_matrix_get(const pp_matrix* m, size_t i, size_t j, double* re, double* im);
PP_API pp_status pp_matrix_to_csv(const pp_matrix* m, char* buf, size_t cap, size_t* needed);

/* Phases. tol <= 0 selects the default. phases is filled in descending order;
 * count receives the number of phases (0 for non-sectorial or zero matrices). */
PP_API pp_status pp_analyze(const pp_matrix* m, double tol, pp_sector_class* cls, double* margin, double* phases,
                            size_t cap, size_t* count);
/* has_phases is 0 for the zero matrix. Fails with PP_NOT_SEMI_SECTORIAL. */
PP_API pp_status pp_phase_interval(const pp_matrix* m, double* lo, double* hi, int* has_phases);
PP_API pp_status pp_schur_complement(const pp_matrix* m, int r, pp_matrix** out);
PP_API pp_status pp_well_defined_schur(const pp_matrix* m, int r, int* ok);

/* Connections: kind is one of shorted, open, series, parallel, hybrid, cascade,
 * cascade-load, hybrid-cascade. b is ignored by shorted and open. */
PP_API pp_status pp_connect(const char* kind, const pp_matrix* a, const pp_matrix* b, int r, pp_matrix** out);
/* Subtractions: series, parallel, hybrid, cascade, hybrid-cascade. */
PP_API pp_status pp_subtract(const char* kind, const pp_matrix* c, const pp_matrix* b, int r, pp_matrix** out);
PP_API pp_status pp_predict_connection(double a_lo, double a_hi, double b_lo, double b_hi, double* lo, double* hi);
PP_API pp_status pp_predict_subtraction(double c_lo, double c_hi, double b_lo, double b_hi, double* lo, double* hi);

/* Networks: JSON {"n": n, "entries": [[{"num": [...], "den": [...]}, ...], ...]}
 * with ascending coefficients. Fixtures: "fig4" (R, L, C, gamma) and
 * "fig14" (R, L, C, kappa, lambda). */
PP_API pp_status pp_network_parse(const char* json, pp_network** out);
PP_API pp_status pp_network_read(const char* path, pp_network** out);
PP_API pp_status pp_network_fixture(const char* name, const double* params, size_t nparams, pp_network** out);
PP_API void pp_network_free(pp_network* n);
PP_API size_t pp_network_ports(const pp_network* n);
PP_API pp_status pp_network_eval(const pp_network* n, double s_re, double s_im, pp_matrix** out);
PP_API pp_status pp_network_to_json(const pp_network* n, char* buf, size_t cap, size_t* needed);

/* Sweeps over log-spaced j*omega with detours around imaginary-axis poles.
 * eps <= 0 selects the per-pole default radius. */
typedef struct pp_grid_options {
    double w_lo;
    double w_hi;
    double points_per_decade;
    double eps;
} pp_grid_options;

PP_API pp_grid_options pp_grid_defaults(void);
PP_API pp_status pp_sweep_network(const pp_network* n, const pp_grid_options* opt, pp_sweep** out);
PP_API pp_status pp_sweep_connection(const char* kind, const pp_network* a, const pp_network* b, int r,
                                     const pp_grid_options* opt, pp_sweep** out);
PP_API void pp_sweep_free(pp_sweep* s);
PP_API size_t pp_sweep_size(const pp_sweep* s);
/* Bounds over w_lo <= omega <= w_hi; has_bounds is 0 when no point had phases. */
PP_API pp_status pp_sweep_band(const pp_sweep* s, double w_lo, double w_hi, double* lo, double* hi, int* has_bounds,
                               int* nonsectorial);
PP_API pp_status pp_sweep_to_csv(const pp_sweep* s, char* buf, size_t cap, size_t* needed);

/* Confluences: JSON {"n", "S", "T", "U", "W"}; duals use "Phi", "Psi", "Xi", "Omega".
 * Builtin names: series:N, parallel:N, hybrid:N:R, cascade:R:S:T,
 * hybrid-cascade:R:S, new. */
PP_API pp_status pp_confluence_parse(const char* json, pp_confluence** out);
PP_API pp_status pp_confluence_read(const char* path, pp_confluence** out);
PP_API pp_status pp_confluence_builtin(const char* name, pp_confluence** out);
PP_API void pp_confluence_free(pp_confluence* c);
PP_API pp_status pp_confluence_to_json(const pp_confluence* c, char* buf, size_t cap, size_t* needed);
/* ok is 1 when both axioms hold; the report lists each check. */
PP_API pp_status pp_confluence_validate(const pp_confluence* c, int* ok, char* buf, size_t cap, size_t* needed);
PP_API pp_status pp_confluence_dual(const pp_confluence* c, pp_dual** out);
PP_API pp_status pp_dual_parse(const char* json, pp_dual** out);
PP_API pp_status pp_dual_read(const char* path, pp_dual** out);
PP_API void pp_dual_free(pp_dual* d);
PP_API pp_status pp_dual_to_json(const pp_dual* d, char* buf, size_t cap, size_t* needed);
PP_API pp_status pp_general_connect(const pp_dual* d, const pp_matrix* a, const pp_matrix* b, pp_matrix** out);

/* Long-running calls below leave a text report on this thread, fetched with
 * pp_last_report. */
PP_API pp_status pp_last_report(char* buf, size_t cap, size_t* needed);

/* Writes the figure CSVs ("fig5" or "fig15") into out_dir; the report lists the files. */
PP_API pp_status pp_demo(const char* figure, const char* out_dir);

/* Runs a property suite; passed is 1 when no trial failed. dump_dir may be NULL. */
PP_API pp_status pp_verify(const char* suite, int trials, uint64_t seed, const char* dump_dir, int* passed);
/* Newline separated suite names. */
PP_API pp_status pp_suite_names(char* buf, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif
