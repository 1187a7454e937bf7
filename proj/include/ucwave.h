/*
 * ucwave — C API for the dispersive unique-continuation laboratory.
 *
 * All functions that can fail return a ucw_status; a human-readable message
 * for the most recent failure on the calling thread is available through
 * ucw_last_error(). Objects returned through ** out parameters are owned by
 * the caller and released with the matching *_free function.
 */
#ifndef UCWAVE_H
#define UCWAVE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ucw_status {
    UCW_OK = 0,
    UCW_ERR_INVALID = 1,      /* bad argument or precondition violation */
    UCW_ERR_DOMAIN = 2,       /* input outside a formula's domain */
    UCW_ERR_NUMERICAL = 3,    /* solver or fit failure */
    UCW_ERR_IO = 4,           /* file system failure */
    UCW_ERR_CONFIG = 5,       /* config parse or validation failure */
    UCW_ERR_CHECK_FAILED = 6  /* a declared experiment check did not pass */
} ucw_status;

const char* ucw_version(void);

/* Message for the last failing call on this thread ("" if none). */
const char* ucw_last_error(void);

/* ------------------------------------------------------------ dispersion */

typedef struct ucw_relation ucw_relation;

ucw_status ucw_relation_power(double p, ucw_relation** out);
ucw_status ucw_relation_transport(double c, ucw_relation** out);
ucw_status ucw_relation_schrodinger(ucw_relation** out);
ucw_status ucw_relation_kdv_linear(ucw_relation** out);
ucw_status ucw_relation_gravity_capillary(double g, double S, double H, ucw_relation** out);
void ucw_relation_free(ucw_relation* rel);

ucw_status ucw_relation_eval(const ucw_relation* rel, double k, double* omega);
/* n in {1, 2} */
ucw_status ucw_relation_derivative(const ucw_relation* rel, double k, int n, double* value);
double ucw_relation_order(const ucw_relation* rel);

/* verdict: 0 SUPERLINEAR, 1 NOT_SUPERLINEAR, 2 INCONCLUSIVE */
ucw_status ucw_relation_check_superlinear(const ucw_relation* rel, double k_max, int* verdict);
ucw_status ucw_relation_check_symbol_bound(const ucw_relation* rel, double order_m, double C,
                                           const double* k_samples, size_t n_samples,
                                           int* holds);

/* --------------------------------------------------------- Fourier states */

typedef struct ucw_state ucw_state;

/* re/im arrays of length 2N+1 in mode order k = -N..N, or NULL for zeros. */
ucw_status ucw_state_create(int truncation_n, const double* re, const double* im,
                            ucw_state** out);
void ucw_state_free(ucw_state* state);

int ucw_state_truncation(const ucw_state* state);
ucw_status ucw_state_get(const ucw_state* state, int k, double* re, double* im);
ucw_status ucw_state_set(ucw_state* state, int k, double re, double im);
double ucw_state_l2_norm(const ucw_state* state);

ucw_status ucw_state_evolve(const ucw_state* state, const ucw_relation* rel, double t,
                            ucw_state** out);
/* re/im buffers of length nx receive u(x_j) on the equispaced grid. */
ucw_status ucw_state_synthesize(const ucw_state* state, int nx, double* re, double* im);
ucw_status ucw_state_evaluate(const ucw_state* state, const ucw_relation* rel,
                              const double* xs, const double* ts, size_t n_points, double* re,
                              double* im);

/* NDJSON record {"N":..., "re":[...], "im":[...]} */
ucw_status ucw_state_save(const ucw_state* state, const char* path);
ucw_status ucw_state_load(const char* path, ucw_state** out);

/* -------------------------------------------------------------- lattices */

typedef struct ucw_lattice ucw_lattice;

/* mirror != 0 stores (k, -omega(k)) instead of (k, omega(k)). */
ucw_status ucw_lattice_create(const ucw_relation* rel, int truncation_n, int mirror,
                              ucw_lattice** out);
void ucw_lattice_free(ucw_lattice* lat);

ucw_status ucw_lattice_separation(const ucw_lattice* lat, double* gamma);
ucw_status ucw_lattice_count_in_ball(const ucw_lattice* lat, double cx, double cy, double r,
                                     long* count);
ucw_status ucw_lattice_counting_function(const ucw_lattice* lat, double r, double x_max,
                                         int threads, long* count);

ucw_status ucw_annulus_vertical_extent(double x_abs, double r, double k, double* d);
ucw_status ucw_annulus_max_extent(double x_abs, double r, double* D);

/* --------------------------------------------- domains and frame bounds */

typedef struct ucw_domain ucw_domain;

ucw_status ucw_domain_create(double t_max, ucw_domain** out);
ucw_status ucw_domain_add_rect(ucw_domain* dom, double x0, double x1, double t0, double t1);
void ucw_domain_free(ucw_domain* dom);

typedef struct ucw_gram ucw_gram;

ucw_status ucw_gram_build(const ucw_lattice* lat, const ucw_domain* dom, int threads,
                          ucw_gram** out);
void ucw_gram_free(ucw_gram* gram);

int ucw_gram_dim(const ucw_gram* gram);
double ucw_gram_domain_area(const ucw_gram* gram);
ucw_status ucw_gram_entry(const ucw_gram* gram, int row, int col, double* re, double* im);
ucw_status ucw_gram_frame_bounds(const ucw_gram* gram, double* d_minus_raw, double* d_minus,
                                 double* d_plus);
/* a^H G a for a coefficient vector of length dim. */
ucw_status ucw_gram_quadratic_form(const ucw_gram* gram, const double* re, const double* im,
                                   double* mass);

ucw_status ucw_restricted_mass(const ucw_state* state, const ucw_relation* rel,
                               const ucw_domain* dom, int threads, double* mass);
/* rows receive 3 values per truncation: d_minus_raw, d_minus, d_plus. */
ucw_status ucw_certificate(const ucw_relation* rel, const ucw_domain* dom, const int* n_list,
                           size_t n_count, int threads, double* rows);
ucw_status ucw_vanishing_witness(const ucw_relation* rel, const ucw_domain* dom,
                                 int truncation_n, int threads, ucw_state** witness,
                                 double* residual_mass);

/* ------------------------------------------------------- fluid / DN layer */

/* H <= 0 selects the infinite-depth symbol |k|. */
double ucw_dn_flat_symbol(double k, double H);

typedef struct ucw_geometry ucw_geometry;

/* b and eta are length-nx samples on [0,2pi); NULL means zero. */
ucw_status ucw_geometry_create(double H0, int nx, int nz, const double* b, const double* eta,
                               double h_min, ucw_geometry** out);
void ucw_geometry_free(ucw_geometry* geom);

ucw_status ucw_dn_apply(const ucw_geometry* geom, const double* phi, double* g_phi);
/* field receives nz*nx values, bottom sigma level first, row-major. */
ucw_status ucw_harmonic_extend(const ucw_geometry* geom, const double* phi, double* field,
                               double* residual);

ucw_status ucw_zcs_rhs(double H0, int nx, int nz, double g, const double* b, const double* eta,
                       const double* phi, double* eta_t, double* phi_t);
ucw_status ucw_b_and_v(int nx, const double* eta, const double* phi, const double* g_phi,
                       double* B, double* v_printed, double* v_standard);
ucw_status ucw_linear_dispersion_fit(int k, double H, double g, int nx, int nz, double dt,
                                     int steps, double amplitude, double* omega);
ucw_status ucw_at_rest(int nx, const double* eta, const double* phi, double x0, double x1,
                       double tol, int* rest);

/* -------------------------------------------------------------- runner */

/* Parses, validates and executes an experiment config file. expect_command
 * (may be NULL) must match the config's [run] command when given. out_dir
 * (may be NULL) overrides the config's output directory; threads > 0 caps
 * internal parallelism. *exit_code receives 0 pass, 1 check failure,
 * 2 config error, 3 numerical failure. Returns UCW_OK only for exit code 0. */
ucw_status ucw_run_config(const char* config_path, const char* expect_command,
                          const char* out_dir, int threads, int* exit_code);

/* Validation only; on failure the line-numbered error list is available via
 * ucw_last_error(). */
ucw_status ucw_validate_config(const char* config_path);

#ifdef __cplusplus
}
#endif

#endif /* UCWAVE_H */
