#ifndef FRACDIFF_H
#define FRACDIFF_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every call.
 */
typedef enum FdStatus {
  FD_STATUS_OK = 0,
  FD_STATUS_INVALID_PARAMS = 1,
  FD_STATUS_DOMAIN = 2,
  FD_STATUS_NON_CONVERGENT = 3,
  FD_STATUS_OUT_OF_WINDOW = 4,
  FD_STATUS_QUADRATURE_FAILURE = 5,
  FD_STATUS_UNSUPPORTED_ORDER = 6,
  FD_STATUS_DEGENERATE_INPUT = 7,
  FD_STATUS_NULL_POINTER = 8,
  FD_STATUS_INVALID_UTF8 = 9,
  /**
   * An identity check ran but did not pass.
   */
  FD_STATUS_CHECK_FAILED = 10,
  FD_STATUS_PANIC = 11,
} FdStatus;

/**
 * Representation used for a density value.
 */
typedef enum FdMethod {
  FD_METHOD_AUTO = 0,
  FD_METHOD_SERIES = 1,
  FD_METHOD_INTEGRAL = 2,
  FD_METHOD_INTEGRAL_BY_PARTS = 3,
  FD_METHOD_CLOSED_FORM = 4,
  FD_METHOD_STABLE = 5,
} FdMethod;

/**
 * Opaque density handle: `u_ν(·, t)` for fixed `(ν, λ, t)`.
 */
typedef struct FdDensity FdDensity;

/**
 * Opaque random stream handle.
 */
typedef struct FdRng FdRng;

typedef struct FdEvalResult {
  double value;
  double abs_err;
  enum FdMethod method;
} FdEvalResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *fd_version(void);

/**
 * Copy of the last error message on this thread, or null if none.
 * Release with [`fd_string_free`].
 */
char *fd_last_error_message(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fd_string_free(char *s);

/**
 * Create a density handle. `nu` is a string such as `"2/3"` or `"0.4"`.
 *
 * # Safety
 * `nu` must be null or NUL-terminated; `out` must be null or writable.
 */
enum FdStatus fd_density_new(const char *nu, double lambda, double t, struct FdDensity **out);

/**
 * Release a density handle. Null is ignored.
 *
 * # Safety
 * `h` must come from [`fd_density_new`] and not have been freed.
 */
void fd_density_free(struct FdDensity *h);

/**
 * `u_ν(x, t)` with the requested representation (`FD_METHOD_AUTO` picks one).
 *
 * # Safety
 * `h` must be a live handle; `out` must be null or writable.
 */
enum FdStatus fd_density_eval(const struct FdDensity *h,
                              double x,
                              enum FdMethod method,
                              struct FdEvalResult *out);

/**
 * Evaluate on `n` points; `values` and `errors` (optional) receive `n` entries.
 *
 * # Safety
 * `xs` must hold `n` values, `values` room for `n`; `errors` is null or room for `n`.
 */
enum FdStatus fd_density_eval_many(const struct FdDensity *h,
                                   const double *xs,
                                   size_t n,
                                   double *values,
                                   double *errors);

/**
 * Location of the maximum of `u_ν(·, t)` on `x ≥ 0`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be null or writable.
 */
enum FdStatus fd_density_mode(const struct FdDensity *h, double *out);

/**
 * Create a random stream. Equal `(seed, stream)` pairs give equal draws.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum FdStatus fd_rng_new(uint64_t seed, uint64_t stream, struct FdRng **out);

/**
 * Release a random stream. Null is ignored.
 *
 * # Safety
 * `h` must come from [`fd_rng_new`] and not have been freed.
 */
void fd_rng_free(struct FdRng *h);

/**
 * One draw of the `n`-times iterated Brownian motion at time `t`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be null or writable.
 */
enum FdStatus fd_sample_iterated(struct FdRng *h, uint32_t n, double t, double *out);

/**
 * One draw from `u_{2/3}(·, t)` with diffusivity `lambda`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be null or writable.
 */
enum FdStatus fd_sample_airy(struct FdRng *h, double lambda, double t, double *out);

/**
 * Scale `λ_n` making `u_{1/2^n}` the law of the `n`-times iterated motion.
 */
double fd_nested_lambda(uint32_t n);

/**
 * `E I_n^{2k}(t)`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum FdStatus fd_even_moment(uint32_t n, uint32_t k, double t, double *out);

/**
 * Density of `max_{0≤s≤t} I_1(s)` at `beta ≥ 0`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum FdStatus fd_max_density(double beta, double t, double *out);

/**
 * Density of the time `I_1` spends above zero up to `t`, at `s > 0`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum FdStatus fd_sojourn_density(double s, double t, double *out);

/**
 * Run the named identity check (or `"all"`). Returns `FD_STATUS_CHECK_FAILED`
 * when it ran but did not pass; the worst discrepancy goes to `max_discrepancy`
 * if that is non-null.
 *
 * # Safety
 * `name` must be null or NUL-terminated; `max_discrepancy` null or writable.
 */
enum FdStatus fd_verify(const char *name, bool fast, double *max_discrepancy);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACDIFF_H */
