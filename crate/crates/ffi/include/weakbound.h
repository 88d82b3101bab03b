#ifndef WEAKBOUND_H
#define WEAKBOUND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum WbStatus {
  WB_STATUS_OK = 0,
  WB_STATUS_NULL_POINTER = 1,
  WB_STATUS_DOMAIN = 2,
  WB_STATUS_CONSTRAINT = 3,
  WB_STATUS_NON_POSITIVE_DENOMINATOR = 4,
  WB_STATUS_CONVERGENCE = 5,
  WB_STATUS_BRACKET = 6,
  WB_STATUS_CERTIFICATION = 7,
  WB_STATUS_PANIC = 8,
} WbStatus;

typedef enum WbOperator {
  WB_OPERATOR_LAMBDA = 0,
  WB_OPERATOR_LAMBDA_STAR = 1,
} WbOperator;

/**
 * Opaque piecewise power function.
 */
typedef struct WbFunction WbFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the restricted function with parameters `(b, d)`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum WbStatus wb_function_spec(uint32_t m, double b, double d, struct WbFunction **out);

/**
 * Builds the restricted adjoint function with parameters `(b*, d*)`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum WbStatus wb_function_star_spec(uint32_t m,
                                    double b_star,
                                    double d_star,
                                    struct WbFunction **out);

/**
 * Builds the general four-parameter function, `a < b <= c < d`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum WbStatus wb_function_general(uint32_t m,
                                  double a,
                                  double b,
                                  double c,
                                  double d,
                                  struct WbFunction **out);

/**
 * Builds the general adjoint function, `a* > b* >= c* > d*`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum WbStatus wb_function_general_star(uint32_t m,
                                       double a_star,
                                       double b_star,
                                       double c_star,
                                       double d_star,
                                       struct WbFunction **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `f` must be null or a handle returned by this library that was not freed yet.
 */
void wb_function_free(struct WbFunction *f);

/**
 * Evaluates `f(t)` for `t > 0`.
 *
 * # Safety
 * `f` must be null or a live handle; `out` must be null or valid for writes.
 */
enum WbStatus wb_function_evaluate(const struct WbFunction *f, double t, double *out);

/**
 * Writes the L¹ norm of `f`.
 *
 * # Safety
 * `f` must be null or a live handle; `out` must be null or valid for writes.
 */
enum WbStatus wb_function_l1_norm(const struct WbFunction *f, double *out);

/**
 * Applies the operator to `f` at `t` in closed form.
 *
 * # Safety
 * `op` must be a declared [`WbOperator`] value; `f` must be null or a live
 * handle; `out` must be null or valid for writes.
 */
enum WbStatus wb_apply_operator(enum WbOperator op,
                                uint32_t m,
                                const struct WbFunction *f,
                                double t,
                                double *out);

/**
 * Lebesgue measure of `{t > 0 : op f(t) >= threshold}`.
 *
 * # Safety
 * `op` must be a declared [`WbOperator`] value; `f` must be null or a live
 * handle; `out` must be null or valid for writes.
 */
enum WbStatus wb_superlevel_measure(enum WbOperator op,
                                    uint32_t m,
                                    const struct WbFunction *f,
                                    double threshold,
                                    double *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum WbStatus wb_w(double b, double d, uint32_t m, double *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum WbStatus wb_w_star(double b_star, double d_star, uint32_t m, double *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum WbStatus wb_d_opt(double b, uint32_t m, double *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum WbStatus wb_d_star_opt(double b_star, uint32_t m, double *out);

/**
 * Maximizes `W(·, ·, m)` with the default grid and refinement.
 *
 * # Safety
 * `b`, `d` and `value` must each be null or valid for writes.
 */
enum WbStatus wb_maximize_w(uint32_t m, double *b, double *d, double *value);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum WbStatus wb_x_infinity(double tol, double *out);

double wb_gill_bound(double m);

/**
 * Copies the last error message of this thread, NUL-terminated and truncated
 * to `len` bytes. Returns the full message length excluding the terminator.
 *
 * # Safety
 * `buf` must be null or valid for writing `len` bytes.
 */
size_t wb_last_error_message(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEAKBOUND_H */
