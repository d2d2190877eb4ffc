/* C interface to the feasible conjugate gradient tensor eigensolver.
 *
 * All objects are opaque handles created by fcg_*_create / fcg_*_generate /
 * fcg_*_load and released with the matching fcg_*_free. Every fallible call
 * returns an fcg_status; on failure, fcg_last_error() holds a message for the
 * calling thread. Vectors are dense arrays of length n; matrices are n*n
 * row-major. Tensor indices are 1-based. Strings returned through char**
 * out-parameters are owned by the caller and released with fcg_string_free.
 *
 * Handles are immutable after creation and may be shared across threads.
 */
#ifndef FCG_FCG_H
#define FCG_FCG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FCG_BUILDING_LIBRARY)
#define FCG_API __declspec(dllexport)
#else
#define FCG_API __declspec(dllimport)
#endif
#else
#define FCG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fcg_status {
  FCG_OK = 0,
  FCG_ERR_INDEX_OUT_OF_RANGE = 1,
  FCG_ERR_DUPLICATE_ENTRY = 2,
  FCG_ERR_ORDER_MISMATCH = 3,
  FCG_ERR_DIMENSION_MISMATCH = 4,
  FCG_ERR_NON_POSITIVE_FORM = 5,
  FCG_ERR_ZERO_VECTOR = 6,
  FCG_ERR_INFEASIBLE_POINT = 7,
  FCG_ERR_ZERO_PREVIOUS_GRADIENT = 8,
  FCG_ERR_ZERO_DIRECTION = 9,
  FCG_ERR_LINE_SEARCH_FAILED = 10,
  FCG_ERR_INVALID_SPEC = 11,
  FCG_ERR_PARSE = 12,
  FCG_ERR_CONFIG = 13,
  FCG_ERR_IO = 14,
  FCG_ERR_INVALID_ARGUMENT = 15,
  FCG_ERR_INTERNAL = 99
} fcg_status;

typedef enum fcg_sense { FCG_MINIMIZE = 0, FCG_MAXIMIZE = 1 } fcg_sense;

typedef enum fcg_delta_mode { FCG_DELTA_HESSIAN = 0, FCG_DELTA_CONSTANT = 1 } fcg_delta_mode;

typedef struct fcg_tensor fcg_tensor;
typedef struct fcg_bform fcg_bform;
typedef struct fcg_objective fcg_objective;
typedef struct fcg_result fcg_result;

typedef struct fcg_solve_config {
  double sigma1;
  double sigma2;
  double rho;
  double tol;
  int max_iter;
  int max_backtracks;
  fcg_delta_mode delta_mode;
  double delta;
} fcg_solve_config;

typedef struct fcg_trace_row {
  int k;
  double lambda;
  double grad_norm;
  double residual;
  double alpha;
  int backtracks;
} fcg_trace_row;

/* Receives one JSON line (no trailing newline) per trial, in trial order. */
typedef void (*fcg_record_callback)(const char* jsonl_record, void* user);

FCG_API const char* fcg_version(void);
FCG_API const char* fcg_status_string(fcg_status status);
FCG_API const char* fcg_last_error(void);
FCG_API void fcg_string_free(char* s);

/* Tensors */
FCG_API fcg_status fcg_tensor_create(int order, int dim, size_t count, const int32_t* indices,
                                     const double* values, fcg_tensor** out);
FCG_API fcg_status fcg_tensor_parse_json(const char* json_text, fcg_tensor** out);
FCG_API fcg_status fcg_tensor_load(const char* path, fcg_tensor** out);
/* spec_json: {"family": "ex1".."ex6", "order": m, "dim": n, "seed": s} */
FCG_API fcg_status fcg_tensor_generate(const char* spec_json, fcg_tensor** out);
FCG_API fcg_status fcg_tensor_to_json(const fcg_tensor* t, char** out);
FCG_API fcg_status fcg_tensor_save(const fcg_tensor* t, const char* path);
FCG_API void fcg_tensor_free(fcg_tensor* t);
FCG_API int fcg_tensor_order(const fcg_tensor* t);
FCG_API int fcg_tensor_dim(const fcg_tensor* t);
FCG_API fcg_status fcg_tensor_entry(const fcg_tensor* t, const int32_t* index, double* out);
FCG_API fcg_status fcg_tensor_txm(const fcg_tensor* t, const double* x, size_t n, double* out);
FCG_API fcg_status fcg_tensor_txm1(const fcg_tensor* t, const double* x, size_t n, double* out);
FCG_API fcg_status fcg_tensor_txm2(const fcg_tensor* t, const double* x, size_t n, double* out);

/* B-forms. spec_json: {"family": "identity2"|"diag_power"|"ex7"|"ex8", "order": m', "seed": s} */
FCG_API fcg_status fcg_bform_generate(const char* spec_json, int dim, fcg_bform** out);
FCG_API fcg_status fcg_bform_quad_form_power(const double* d, int dim, int order, fcg_bform** out);
FCG_API fcg_status fcg_bform_dense(const fcg_tensor* b, fcg_bform** out);
FCG_API void fcg_bform_free(fcg_bform* b);
FCG_API int fcg_bform_order(const fcg_bform* b);
FCG_API fcg_status fcg_bform_phi(const fcg_bform* b, const double* x, size_t n, double* out);
FCG_API fcg_status fcg_bform_retract(const fcg_bform* b, const double* x, const double* d, size_t n,
                                     double alpha, double* out);

/* Objectives (copies of the tensor and B-form are shared, not owned by the caller) */
FCG_API fcg_status fcg_objective_create(const fcg_tensor* a, const fcg_bform* b, fcg_sense sense,
                                        fcg_objective** out);
FCG_API void fcg_objective_free(fcg_objective* obj);
FCG_API int fcg_objective_dim(const fcg_objective* obj);
/* Scales x onto the feasible surface B x^m' = 1. */
FCG_API fcg_status fcg_objective_normalize(const fcg_objective* obj, const double* x, size_t n,
                                           double* out);
FCG_API fcg_status fcg_objective_residual(const fcg_objective* obj, const double* x, size_t n,
                                          double* out);
FCG_API fcg_status fcg_objective_feas_grad(const fcg_objective* obj, const double* x, size_t n,
                                           double* out);

/* Solver */
FCG_API void fcg_solve_config_default(fcg_solve_config* cfg);
FCG_API fcg_status fcg_solve(const fcg_objective* obj, const double* x0, size_t n,
                             const fcg_solve_config* cfg, fcg_result** out);
FCG_API void fcg_result_free(fcg_result* r);
FCG_API double fcg_result_lambda(const fcg_result* r);
FCG_API double fcg_result_residual(const fcg_result* r);
FCG_API int fcg_result_iterations(const fcg_result* r);
FCG_API int fcg_result_backtracks(const fcg_result* r);
FCG_API int fcg_result_converged(const fcg_result* r);
/* Empty string when the run did not stop on an error. */
FCG_API const char* fcg_result_failure(const fcg_result* r);
FCG_API fcg_status fcg_result_x(const fcg_result* r, double* out, size_t n);
FCG_API size_t fcg_result_trace_length(const fcg_result* r);
FCG_API fcg_status fcg_result_trace_row(const fcg_result* r, size_t k, fcg_trace_row* out);

/* Verification */
FCG_API fcg_status fcg_fd_check_gradient(const fcg_objective* obj, const double* x, size_t n,
                                         double step, double* out);
FCG_API fcg_status fcg_fd_check_hessian(const fcg_objective* obj, const double* x, size_t n,
                                        double step, double* out);
/* Output: {"pairs": [{"lambda": .., "residual": .., "x": [..]}, ...]} */
FCG_API fcg_status fcg_oracle_enumerate_n2(const fcg_objective* obj, int grid, char** out_json);
FCG_API fcg_status fcg_oracle_enumerate_n3(const fcg_objective* obj, int starts, uint64_t seed,
                                           char** out_json);

/* Multi-start experiment from a JSON run configuration. Records go to
 * `callback` (may be NULL); the summary JSON goes to *summary_json (may be
 * NULL). *failed_trials receives the number of non-converged trials. */
FCG_API fcg_status fcg_bench_run(const char* config_json, fcg_record_callback callback, void* user,
                                 char** summary_json, int* failed_trials);
/* Seeded trial start: entries uniform in [-1, 1] (not normalized). */
FCG_API fcg_status fcg_trial_start(int dim, uint64_t seed, int trial, double* out);
/* Builds the objective a run configuration describes (tensor, B-form, sense). */
FCG_API fcg_status fcg_objective_from_config(const char* config_json, fcg_objective** out);
/* Normalizes and validates a run configuration, filling defaults. */
FCG_API fcg_status fcg_config_normalize(const char* config_json, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* FCG_FCG_H */
