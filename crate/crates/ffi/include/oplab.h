#ifndef OPLAB_H
#define OPLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OplabStatus {
  OPLAB_STATUS_OK = 0,
  OPLAB_STATUS_NULL_POINTER = 1,
  OPLAB_STATUS_DIMENSION_MISMATCH = 2,
  OPLAB_STATUS_HYPOTHESIS = 3,
  OPLAB_STATUS_NUMERICAL = 4,
  OPLAB_STATUS_INVALID_ARGUMENT = 5,
  OPLAB_STATUS_PANIC = 6,
} OplabStatus;

typedef enum OplabMode {
  OPLAB_MODE_CLASSIC = 0,
  OPLAB_MODE_NORMAL = 1,
  OPLAB_MODE_CO_HYPONORMAL = 2,
  OPLAB_MODE_NONE = 3,
} OplabMode;

typedef enum OplabMonotone {
  OPLAB_MONOTONE_SQRT = 0,
  OPLAB_MONOTONE_INVERSE = 1,
  OPLAB_MONOTONE_SQUARE = 2,
  OPLAB_MONOTONE_POWER = 3,
} OplabMonotone;

/**
 * Opaque matrix handle. Free with [`oplab_matrix_free`].
 */
typedef struct OplabMatrix OplabMatrix;

/**
 * Both sides of `lhs <= rhs`, with `margin = rhs - lhs`.
 */
typedef struct OplabMargin {
  double lhs;
  double rhs;
  double margin;
  /**
   * 1 when every hypothesis held, 0 when the margin was force-evaluated.
   */
  int hypotheses_hold;
} OplabMargin;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *oplab_last_error(void);

/**
 * Builds a `dim x dim` matrix from `2 * dim * dim` interleaved row-major doubles.
 *
 * # Safety
 * `data` must point to `2 * dim * dim` readable doubles and `out` must be writable.
 */
enum OplabStatus oplab_matrix_new(size_t dim, const double *data, struct OplabMatrix **out);

/**
 * # Safety
 * `m` must be NULL or a handle returned by this library that was not yet freed.
 */
void oplab_matrix_free(struct OplabMatrix *m);

/**
 * Dimension of `m`, or 0 for NULL.
 *
 * # Safety
 * `m` must be NULL or a live handle.
 */
size_t oplab_matrix_dim(const struct OplabMatrix *m);

/**
 * # Safety
 * `m` must be a live handle; `re` and `im` must be writable.
 */
enum OplabStatus oplab_matrix_get(const struct OplabMatrix *m,
                                  size_t row,
                                  size_t col,
                                  double *re,
                                  double *im);

/**
 * Copies the entries of `m` as interleaved row-major doubles; `len` must be `2 * dim * dim`.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum OplabStatus oplab_matrix_copy_data(const struct OplabMatrix *m, double *out, size_t len);

/**
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum OplabStatus oplab_operator_norm(const struct OplabMatrix *m, double *out);

/**
 * Spectral radius by the Gelfand formula.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum OplabStatus oplab_spectral_radius(const struct OplabMatrix *m, double *out);

/**
 * # Safety
 * `m` must be a live handle and `out` writable. The result must be freed.
 */
enum OplabStatus oplab_sqrt_psd(const struct OplabMatrix *m, struct OplabMatrix **out);

/**
 * `|T| = (T*T)^(1/2)`.
 *
 * # Safety
 * `m` must be a live handle and `out` writable. The result must be freed.
 */
enum OplabStatus oplab_abs_value(const struct OplabMatrix *m, struct OplabMatrix **out);

/**
 * # Safety
 * `m` must be a live handle and `out` writable. The result must be freed.
 */
enum OplabStatus oplab_power_psd(const struct OplabMatrix *m,
                                 double alpha,
                                 struct OplabMatrix **out);

/**
 * # Safety
 * `out` must be writable. The result must be freed.
 */
enum OplabStatus oplab_truncated_shift(size_t n, struct OplabMatrix **out);

/**
 * `|<AKx, x>| <= ||K|| <Ax, x>` with `x` given as `len` interleaved complex entries.
 * With `force != 0` failing hypotheses are reported through
 * `hypotheses_hold` instead of an error.
 *
 * # Safety
 * `a`, `k` must be live handles, `x` must hold `2 * len` doubles, `out` writable.
 */
enum OplabStatus oplab_reid_margin(const struct OplabMatrix *a,
                                   const struct OplabMatrix *k,
                                   const double *x,
                                   size_t len,
                                   enum OplabMode mode,
                                   int force,
                                   struct OplabMargin *out);

/**
 * `|<Tx, x>| <= <|T|x, x>` for hyponormal `T`.
 *
 * # Safety
 * `t` must be a live handle, `x` must hold `2 * len` doubles, `out` writable.
 */
enum OplabStatus oplab_kittaneh_margin(const struct OplabMatrix *t,
                                       const double *x,
                                       size_t len,
                                       int force,
                                       struct OplabMargin *out);

/**
 * `|<AKx, x>| <= r(K) <Ax, x>` for `A >= 0` and `K*A = AK`.
 *
 * # Safety
 * `a`, `k` must be live handles, `x` must hold `2 * len` doubles, `out` writable.
 */
enum OplabStatus oplab_halmos_reid_margin(const struct OplabMatrix *a,
                                          const struct OplabMatrix *k,
                                          const double *x,
                                          size_t len,
                                          int force,
                                          struct OplabMargin *out);

/**
 * Certificate for `f(A) <= f(B)` given `0 <= A <= B`. `alpha` is read only
 * for `OPLAB_MONOTONE_POWER`. `passed` receives 1 when the smallest
 * eigenvalue of the difference is within tolerance of nonnegative.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` and `passed` writable.
 */
enum OplabStatus oplab_monotonicity_cert(enum OplabMonotone kind,
                                         double alpha,
                                         const struct OplabMatrix *a,
                                         const struct OplabMatrix *b,
                                         int force,
                                         struct OplabMargin *out,
                                         int *passed);

/**
 * Runs a campaign described by a JSON configuration (fields as in the CLI;
 * unspecified fields take their defaults) and returns the JSON report.
 * `fuzz != 0` labels the run as a search. `exit_code` receives the CLI
 * exit code of the verdict (0 pass, 1 violation, 2 hypothesis error).
 *
 * # Safety
 * `config_json` must be a NUL-terminated string; `report` and `exit_code`
 * writable. Free the report with [`oplab_string_free`].
 */
enum OplabStatus oplab_run_check_json(const char *config_json,
                                      int fuzz,
                                      char **report,
                                      int *exit_code);

/**
 * Evaluates a named counterexample; `dim == 0` selects the default size.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `report` writable. Free the
 * report with [`oplab_string_free`].
 */
enum OplabStatus oplab_counterexample_json(const char *name, size_t dim, char **report);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library that was not yet freed.
 */
void oplab_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPLAB_H */
