/* C interface to the ieqnls solver library.
 *
 * Objects are opaque handles created by *_create functions and released by
 * the matching *_destroy. Every function returns an ieqnls_status; on failure
 * ieqnls_last_error() returns a message for the calling thread.
 *
 * Complex fields cross the boundary as interleaved (re, im) double arrays of
 * length 2 * size. 2D fields are row-major with the x index slowest.
 */
#ifndef IEQNLS_H
#define IEQNLS_H

#include <stddef.h>

#if defined(_WIN32)
#define IEQNLS_API __declspec(dllexport)
#else
#define IEQNLS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ieqnls_status {
  IEQNLS_OK = 0,
  IEQNLS_ERR_INVALID_ARGUMENT = 1, /* null handle, short buffer */
  IEQNLS_ERR_SOLVER = 2,           /* stage fixed point did not converge */
  IEQNLS_ERR_CONFIG = 3,           /* bad grid, tableau or run configuration */
  IEQNLS_ERR_DIMENSION = 4,
  IEQNLS_ERR_LOOKUP = 5,           /* unknown tableau or scenario name */
  IEQNLS_ERR_DIVERGED = 6,         /* NaN/Inf inside a stage solve */
  IEQNLS_ERR_DATA = 7,
  IEQNLS_ERR_INTERNAL = 99
} ieqnls_status;

typedef struct ieqnls_tableau ieqnls_tableau;
typedef struct ieqnls_problem ieqnls_problem;
typedef struct ieqnls_state ieqnls_state;
typedef struct ieqnls_run_config ieqnls_run_config;

typedef struct ieqnls_solver_config {
  double tol;         /* increment tolerance, scaled by 1 + max|u^n| */
  size_t max_iters;
  int linearized;     /* nonzero: invert the dispersive part in each sweep */
  int allow_nonconservative;
} ieqnls_solver_config;

typedef struct ieqnls_invariants {
  double mass;
  double energy_modified;
  double energy_original;
} ieqnls_invariants;

typedef struct ieqnls_step_report {
  size_t max_stage_iterations;
  double max_residual;
} ieqnls_step_report;

/* Called after every accepted step of ieqnls_integrate. */
typedef void (*ieqnls_step_callback)(size_t step, double t, const ieqnls_invariants* inv,
                                     const ieqnls_step_report* report, void* user);

/* Receives progress and summary lines from the experiment commands. */
typedef void (*ieqnls_log_callback)(const char* line, void* user);

IEQNLS_API const char* ieqnls_version(void);
IEQNLS_API const char* ieqnls_last_error(void);

/* ---- tableaux ---- */
IEQNLS_API size_t ieqnls_tableau_registry_count(void);
/* NULL when index is out of range. */
IEQNLS_API const char* ieqnls_tableau_registry_name(size_t index);
IEQNLS_API ieqnls_status ieqnls_tableau_create(const char* name, ieqnls_tableau** out);
IEQNLS_API ieqnls_status ieqnls_tableau_from_b(const double* b, size_t stages, int claimed_order,
                                               const char* name, ieqnls_tableau** out);
IEQNLS_API void ieqnls_tableau_destroy(ieqnls_tableau* t);
IEQNLS_API ieqnls_status ieqnls_tableau_stages(const ieqnls_tableau* t, size_t* stages);
IEQNLS_API ieqnls_status ieqnls_tableau_order(const ieqnls_tableau* t, int* order);
/* Any of b (s), a (s*s, row-major) and c (s) may be NULL. */
IEQNLS_API ieqnls_status ieqnls_tableau_coefficients(const ieqnls_tableau* t, double* b,
                                                     double* a, double* c);
IEQNLS_API ieqnls_status ieqnls_tableau_defect(const ieqnls_tableau* t, double* defect);
/* Writes a NUL-terminated report for `name` (or "all"). *needed receives the
 * full length including the terminator; output is truncated to capacity. */
IEQNLS_API ieqnls_status ieqnls_tableau_report(const char* name, char* buf, size_t capacity,
                                               size_t* needed);

/* ---- problems and states ---- */
IEQNLS_API ieqnls_status ieqnls_problem_create_1d(double a, double b, size_t n, double beta,
                                                  ieqnls_problem** out);
IEQNLS_API ieqnls_status ieqnls_problem_create_2d(double ax, double bx, double ay, double by,
                                                  size_t n, double beta, ieqnls_problem** out);
/* Scenario defaults; n = 0 keeps the default node count. */
IEQNLS_API ieqnls_status ieqnls_problem_create_scenario(const char* scenario, size_t n,
                                                        ieqnls_problem** out);
IEQNLS_API void ieqnls_problem_destroy(ieqnls_problem* p);
IEQNLS_API ieqnls_status ieqnls_problem_size(const ieqnls_problem* p, size_t* size);
IEQNLS_API ieqnls_status ieqnls_problem_dim(const ieqnls_problem* p, int* dim);
IEQNLS_API ieqnls_status ieqnls_problem_nodes(const ieqnls_problem* p, int axis, double* nodes,
                                              size_t len);

IEQNLS_API ieqnls_status ieqnls_state_create(const ieqnls_problem* p, const double* u,
                                             size_t size, double t0, ieqnls_state** out);
IEQNLS_API ieqnls_status ieqnls_state_create_scenario(const ieqnls_problem* p,
                                                      const char* scenario,
                                                      ieqnls_state** out);
IEQNLS_API void ieqnls_state_destroy(ieqnls_state* s);
IEQNLS_API ieqnls_status ieqnls_state_time(const ieqnls_state* s, double* t);
IEQNLS_API ieqnls_status ieqnls_state_get_u(const ieqnls_state* s, double* u, size_t size);
IEQNLS_API ieqnls_status ieqnls_state_get_r(const ieqnls_state* s, double* r, size_t size);

IEQNLS_API ieqnls_status ieqnls_compute_invariants(const ieqnls_problem* p,
                                                   const ieqnls_state* s,
                                                   ieqnls_invariants* out);

/* ---- time stepping ---- */
IEQNLS_API void ieqnls_solver_config_default(ieqnls_solver_config* cfg);
/* cfg may be NULL for defaults; report may be NULL. */
IEQNLS_API ieqnls_status ieqnls_step(const ieqnls_problem* p, ieqnls_state* s,
                                     const ieqnls_tableau* t, double dt,
                                     const ieqnls_solver_config* cfg,
                                     ieqnls_step_report* report);
IEQNLS_API ieqnls_status ieqnls_integrate(const ieqnls_problem* p, ieqnls_state* s,
                                          const ieqnls_tableau* t, double t_end, double dt,
                                          const ieqnls_solver_config* cfg,
                                          ieqnls_step_callback cb, void* user);

/* ---- experiment commands ---- */
IEQNLS_API ieqnls_status ieqnls_run_config_create(ieqnls_run_config** out);
IEQNLS_API void ieqnls_run_config_destroy(ieqnls_run_config* cfg);
IEQNLS_API ieqnls_status ieqnls_run_config_set(ieqnls_run_config* cfg, const char* key,
                                               const char* value);
IEQNLS_API ieqnls_status ieqnls_run_config_load(ieqnls_run_config* cfg, const char* path);

IEQNLS_API ieqnls_status ieqnls_cmd_run(const ieqnls_run_config* cfg, ieqnls_log_callback log,
                                        void* user);
IEQNLS_API ieqnls_status ieqnls_cmd_longtime(const ieqnls_run_config* cfg,
                                             ieqnls_log_callback log, void* user);
IEQNLS_API ieqnls_status ieqnls_cmd_converge(const ieqnls_run_config* cfg,
                                             ieqnls_log_callback log, void* user);

#ifdef __cplusplus
}
#endif

#endif /* IEQNLS_H */
