/*
 * C interface to the composite finite-sum solvers (VRADA plus the SVRG,
 * Katyusha, and MiG baselines).
 *
 * Conventions:
 *   - every fallible call returns a vrada_status; VRADA_OK is 0
 *   - on failure, vrada_last_error() holds a thread-local message
 *   - objects created by *_create/_open/_compute calls are released with the
 *     matching *_free
 *   - parameter vectors are dense double arrays of length
 *     vrada_problem_dim(); datasets hold the sparse rows internally
 */
#ifndef VRADA_H
#define VRADA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vrada_status {
  VRADA_OK = 0,
  VRADA_ERR_INVALID_ARG = 1,
  VRADA_ERR_SHAPE = 2,
  VRADA_ERR_INDEX = 3,
  VRADA_ERR_NUMERIC = 4,
  VRADA_ERR_PARSE = 5,
  VRADA_ERR_AUDIT = 6,   /* a runtime guarantee check failed */
  VRADA_ERR_CONFIG = 7,
  VRADA_ERR_TUNING = 8,  /* every grid value diverged */
  VRADA_ERR_REFERENCE = 9,
  VRADA_ERR_IO = 10,
  VRADA_ERR_UNKNOWN = 11
} vrada_status;

const char* vrada_status_name(vrada_status status);
const char* vrada_last_error(void);

/* -------- datasets -------- */

typedef struct vrada_dataset vrada_dataset;

/* LibSVM text format; ".gz" paths are gunzipped transparently. */
vrada_status vrada_dataset_open(const char* path, vrada_dataset** out);
vrada_status vrada_dataset_from_string(const char* text, vrada_dataset** out);

/* Dense random least-squares rows with a planted model. */
vrada_status vrada_dataset_synth_ridge(int64_t n, int64_t d, uint64_t seed,
                                       vrada_dataset** out);
/* Sparse binary-feature rows with +-1 labels from a planted logistic model. */
vrada_status vrada_dataset_synth_binary(int64_t n, int64_t d, int64_t nnz,
                                        uint64_t seed, vrada_dataset** out);

vrada_status vrada_dataset_normalize_rows(vrada_dataset* ds);
/* Appends a constant-1 coordinate; not affected by prior normalization. */
vrada_status vrada_dataset_add_bias(vrada_dataset* ds);
vrada_status vrada_dataset_override_dim(vrada_dataset* ds, int64_t d);
vrada_status vrada_dataset_save(const vrada_dataset* ds, const char* path);

int64_t vrada_dataset_rows(const vrada_dataset* ds);
int64_t vrada_dataset_dim(const vrada_dataset* ds);
int64_t vrada_dataset_classes(const vrada_dataset* ds);
int vrada_dataset_normalized(const vrada_dataset* ds);
int64_t vrada_dataset_zero_rows(const vrada_dataset* ds);
/* Raw label value mapped to class index cls (classes sort by raw label). */
vrada_status vrada_dataset_class_label(const vrada_dataset* ds, int64_t cls,
                                       double* out);
void vrada_dataset_free(vrada_dataset* ds);

/* -------- problems -------- */

typedef struct vrada_problem vrada_problem;

/* loss: "binary-logistic", "multinomial-logistic", or "squared".
 * The regularizer is (lambda2/2)||x||^2 + lambda1||x||_1; lambda2 doubles as
 * the strong-convexity modulus fed to the solvers. */
vrada_status vrada_problem_create(const vrada_dataset* ds, const char* loss,
                                  double lambda2, double lambda1,
                                  vrada_problem** out);

int64_t vrada_problem_dim(const vrada_problem* p);
int64_t vrada_problem_components(const vrada_problem* p);
double vrada_problem_smoothness(const vrada_problem* p);
double vrada_problem_strong_convexity(const vrada_problem* p);
/* 1 when the logistic smoothness bound had to be scaled for unnormalized rows. */
int vrada_problem_smoothness_warned(const vrada_problem* p);

vrada_status vrada_problem_value(const vrada_problem* p, const double* x,
                                 int64_t len, double* out);
vrada_status vrada_problem_grad(const vrada_problem* p, const double* x,
                                int64_t len, double* smooth_value,
                                double* grad_out);
void vrada_problem_free(vrada_problem* p);

/* -------- solving -------- */

typedef struct vrada_options {
  const char* solver; /* vrada, svrg, katyusha-sc, katyusha-nsc, mig-sc, mig-nsc */
  int64_t m;          /* inner iterations per epoch; 0 = 2n */
  double L_param;     /* 0 = the problem's smoothness bound */
  int64_t epochs;
  uint64_t seed;
  double gap_target; /* NAN = run the full epoch budget */
  double f_star;     /* NAN = unknown; enables the gap column */
  const double* x_star; /* NULL, or the reference point for distance audits */
  int deterministic; /* replace sampled gradients by full gradients */
  int audit;         /* enforce the convergence guarantees at runtime */
  const double* x0;  /* NULL = zero vector */
  const char* svrg_anchor;  /* "uniform" (default) or "last" */
  double svrg_step_divisor; /* 0 = 4; SVRG step is 1/(divisor * L_param) */
} vrada_options;

void vrada_options_init(vrada_options* opts);

typedef struct vrada_trace vrada_trace;

typedef struct vrada_trace_row {
  int64_t epoch;
  double passes;
  double elapsed_ms;
  double objective;
  double gap; /* NaN when no reference value is set */
  double a_s; /* NaN for solvers without a weight schedule */
} vrada_trace_row;

vrada_status vrada_solve(const vrada_problem* p, const vrada_options* opts,
                         vrada_trace** out);

int64_t vrada_trace_rows(const vrada_trace* t);
vrada_status vrada_trace_row_at(const vrada_trace* t, int64_t i,
                                vrada_trace_row* out);
/* epoch-budget, gap-target, saturated, diverged, or precision-limit */
const char* vrada_trace_status(const vrada_trace* t);
const char* vrada_trace_solver(const vrada_trace* t);
uint64_t vrada_trace_seed(const vrada_trace* t);
int64_t vrada_trace_header_count(const vrada_trace* t);
vrada_status vrada_trace_header_at(const vrada_trace* t, int64_t i,
                                   const char** key, const char** value);
vrada_status vrada_trace_final_x(const vrada_trace* t, double* out, int64_t len);
void vrada_trace_free(vrada_trace* t);

/* Fixed CSV schema shared by every solver. */
const char* vrada_trace_csv_header(void);
/* One CSV line per trace row (no header); free with vrada_string_free. */
vrada_status vrada_trace_csv(const vrada_trace* t, char** out);

/* -------- closed-form ridge oracle -------- */

/* Exact minimizer of the squared loss over ds plus (sigma/2)||x||^2 by a
 * direct linear solve. *unique is 0 when sigma = 0 left the least-squares
 * solution non-unique. x_star may be NULL. */
vrada_status vrada_ridge_closed_form(const vrada_dataset* ds, double sigma,
                                     double* f_star, double* x_star,
                                     int* unique);

/* -------- reference solutions -------- */

/* High-accuracy (x*, f*) via an accelerated run cross-checked against an
 * independently coded proximal gradient descent. *attained is 0 when only an
 * infimum estimate exists (e.g. separable unregularized logistic). */
vrada_status vrada_reference_compute(const vrada_problem* p, double* f_star,
                                     double* x_star, int* attained);
vrada_status vrada_reference_save(const char* path, double f_star,
                                  const double* x_star, int64_t dim);
/* *found = 0 (and VRADA_OK) when the file does not exist. */
vrada_status vrada_reference_load(const char* path, int64_t dim, double* f_star,
                                  double* x_star, int* found);

/* -------- tuning -------- */

/* Runs every grid value with seed 0 for the base epoch budget and picks the
 * smallest final objective among non-diverged runs. final_objectives may be
 * NULL; diverged entries come back NaN. */
vrada_status vrada_tune(const vrada_problem* p, const vrada_options* base,
                        const double* grid, int64_t grid_len, double* best_L,
                        double* final_objectives);

/* -------- schedule utilities -------- */

/* Grows the epoch weight schedule for (m, L, sigma) and verifies every
 * guaranteed lower bound; optionally returns the plain-text margin table. */
vrada_status vrada_schedule_audit(int64_t m, double L, double sigma,
                                  int64_t epochs, char** report);
void vrada_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* VRADA_H */
