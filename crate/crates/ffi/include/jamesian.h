#ifndef JAMESIAN_H
#define JAMESIAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the numeric values match the CLI exit codes where they
 * overlap.
 */
typedef enum JmStatus {
  JM_STATUS_OK = 0,
  /**
   * bad argument or parameter
   */
  JM_STATUS_USAGE = 1,
  /**
   * outside the model's domain, e.g. an undefined corner
   */
  JM_STATUS_DOMAIN = 2,
  /**
   * quadrature, inversion, integration or simulation failure
   */
  JM_STATUS_NUMERICS = 3,
  JM_STATUS_NULL_POINTER = 5,
  JM_STATUS_PANIC = 6,
} JmStatus;

typedef enum JmBoundary {
  JM_BOUNDARY_INTERIOR = 0,
  JM_BOUNDARY_FORCED = 1,
  JM_BOUNDARY_UNDEFINED = 2,
} JmBoundary;

/**
 * Opaque model handle.
 */
typedef struct JmModel JmModel;

/**
 * Plain-data copy of a Monte Carlo estimate.
 */
typedef struct JmMcEstimate {
  double a;
  double b;
  uint64_t trials;
  uint64_t wins;
  double estimate;
  double std_error;
  uint64_t seed;
  uint64_t ties_resampled_total;
} JmMcEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a model from a spec string: `james`, `piecewise`, `logit`,
 * `rational`, `cot`, `probit` or `power:<n>` with `n >= 1`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum JmStatus jm_model_new(const char *spec, struct JmModel **out);

/**
 * Releases a model. NULL is ignored.
 *
 * # Safety
 * `model` must come from `jm_model_new` and not be used afterwards.
 */
void jm_model_free(struct JmModel *model);

/**
 * Copy of the model name; release it with `jm_string_free`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum JmStatus jm_model_name(const struct JmModel *model, char **out);

/**
 * `J(a, b)` including the boundary rules.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum JmStatus jm_model_eval(const struct JmModel *model, double a, double b, double *out);

/**
 * Analytic `(dJ/da, dJ/db)` at an interior point, written to `out[0..2]`.
 *
 * # Safety
 * `model` must be a live handle; `out` must point to two writable doubles.
 */
enum JmStatus jm_model_gradient(const struct JmModel *model, double a, double b, double *out);

/**
 * Boundary disposition of `(a, b)`. `value` receives the forced value and
 * is left untouched otherwise.
 *
 * # Safety
 * `kind` must be writable; `value` may be NULL.
 */
enum JmStatus jm_classify_boundary(double a, double b, enum JmBoundary *kind, double *value);

/**
 * Simulates `trials` Bernoulli-pair contests. Deterministic in `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum JmStatus jm_mc_estimate(double a,
                             double b,
                             uint64_t trials,
                             uint64_t seed,
                             uint64_t max_rounds,
                             struct JmMcEstimate *out);

/**
 * Audits the model against `list` (`james`, `proto` or `involutive`) on a
 * grid with `cells` cells per axis. `violations` receives the count; zero
 * means the audit passed.
 *
 * # Safety
 * `model` must be a live handle, `list` NUL-terminated, `violations`
 * writable.
 */
enum JmStatus jm_check_conditions(const struct JmModel *model,
                                  const char *list,
                                  size_t cells,
                                  double tol,
                                  size_t *violations);

/**
 * Like `jm_check_conditions`, returning the full report as JSON. Free the
 * string with `jm_string_free`.
 *
 * # Safety
 * As for `jm_check_conditions`; `out` must be writable.
 */
enum JmStatus jm_check_conditions_json(const struct JmModel *model,
                                       const char *list,
                                       size_t cells,
                                       double tol,
                                       char **out);

/**
 * `n` points of the level curve `J(a, b) = c` with `a` uniform on
 * `[0.001, 0.999]`, written to `a_out[0..n]` and `b_out[0..n]`.
 *
 * # Safety
 * `model` must be a live handle; both output arrays must hold `n` doubles.
 */
enum JmStatus jm_level_curve(const struct JmModel *model,
                             double c,
                             size_t n,
                             double *a_out,
                             double *b_out);

/**
 * Message for the last failure on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *jm_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void jm_string_free(char *s);

/**
 * Library version, statically allocated.
 */
const char *jm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JAMESIAN_H */
