#ifndef LIOUVILLE_H
#define LIOUVILLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which independence test [`lv_expindep`] runs.
 */
typedef enum LvIndepMode {
  /**
   * Linear independence of `exp(g_i)` over polynomials.
   */
  LV_INDEP_MODE_LINEAR = 0,
  /**
   * Algebraic independence of `exp(f_j)`.
   */
  LV_INDEP_MODE_ALGEBRAIC = 1,
} LvIndepMode;

/**
 * Result of every fallible call. One variant per library error kind plus
 * the boundary failures.
 */
typedef enum LvStatus {
  LV_STATUS_OK = 0,
  LV_STATUS_NULL_POINTER = 1,
  LV_STATUS_UTF8 = 2,
  LV_STATUS_PANIC = 3,
  LV_STATUS_DIVISOR_NOT_SEPARATED_FROM_ZERO = 10,
  LV_STATUS_NOT_SEPARATED_FROM_ZERO = 11,
  LV_STATUS_DOMAIN_ERROR = 12,
  LV_STATUS_AMBIGUOUS_NEAREST_INTEGER = 13,
  LV_STATUS_REFINEMENT_BUDGET_EXCEEDED = 14,
  LV_STATUS_INVALID_SCHEDULE = 15,
  LV_STATUS_ZERO_DISTANCE = 16,
  LV_STATUS_WITNESS_SEARCH_EXHAUSTED = 17,
  LV_STATUS_IMAGE_COLLAPSE = 18,
  LV_STATUS_BUDGET_EXCEEDED = 19,
  LV_STATUS_NO_ROOT_IN_J = 20,
  LV_STATUS_NON_MONOTONE_SLICE = 21,
  LV_STATUS_DOMAIN_ESCAPE = 22,
  LV_STATUS_INVALID_RELATION = 23,
  LV_STATUS_ZERO_P = 24,
  LV_STATUS_CONSTANT_F = 25,
  LV_STATUS_INVALID_WITNESS = 26,
  LV_STATUS_PARSE_ERROR = 27,
  LV_STATUS_INVALID_ARGUMENT = 28,
  LV_STATUS_FORMAT_ERROR = 29,
} LvStatus;

/**
 * Opaque handle to an exact real.
 */
typedef struct LvReal LvReal;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Stable name of a status, for example `"WitnessSearchExhausted"`.
 */
const char *lv_status_name(enum LvStatus status);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *lv_last_error(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void lv_string_free(char *s);

/**
 * Parse an expression such as `"liouville(10) + 1/3"` into a new handle.
 *
 * # Safety
 * `expr` must be a NUL-terminated string, `out` writable.
 */
enum LvStatus lv_real_parse(const char *expr, struct LvReal **out);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `x` must come from [`lv_real_parse`] and not have been freed.
 */
void lv_real_free(struct LvReal *x);

/**
 * Decimal rendering to `digits` places (truncated, not certified in the
 * last place).
 *
 * # Safety
 * `x` must be a live handle, `out` writable.
 */
enum LvStatus lv_real_decimal(const struct LvReal *x, uint32_t digits, char **out);

/**
 * Rational endpoints `lo`, `hi` (as `p/q` strings) of an enclosure of width
 * at most `2^-k`.
 *
 * # Safety
 * `x` must be a live handle, `lo` and `hi` writable.
 */
enum LvStatus lv_real_enclosure(const struct LvReal *x, uint32_t k, char **lo, char **hi);

/**
 * Certify `x` to `level` and return the certificate file as JSON.
 * `label` may be null.
 *
 * # Safety
 * `x` must be a live handle, `label` null or NUL-terminated, `json_out`
 * writable.
 */
enum LvStatus lv_certify(const struct LvReal *x,
                         uint32_t level,
                         const char *label,
                         char **json_out);

/**
 * Re-verify a certificate file from its JSON text. On success `level_out`
 * (if not null) receives the lowest level certified across its subjects.
 *
 * # Safety
 * `json` must be NUL-terminated, `level_out` null or writable.
 */
enum LvStatus lv_verify(const char *json, uint32_t *level_out);

/**
 * Decide independence of `exp(p_i)` for `n` polynomials written like
 * `"z^2 + 3z"`. `independent_out` receives 1 or 0; `detail_out`, if not
 * null, receives the verdict as JSON, including any dependence witness.
 *
 * # Safety
 * `polys` must point to `n` NUL-terminated strings, `independent_out`
 * writable, `detail_out` null or writable.
 */
enum LvStatus lv_expindep(enum LvIndepMode mode,
                          const char *const *polys,
                          size_t n,
                          int32_t *independent_out,
                          char **detail_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LIOUVILLE_H */
