#ifndef QKRALL_H
#define QKRALL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QkStatus {
  QK_STATUS_OK = 0,
  QK_STATUS_NULL_POINTER = 1,
  QK_STATUS_INVALID_UTF8 = 2,
  /**
   * Parse failure, degenerate parameters or an unknown name.
   */
  QK_STATUS_INVALID_INPUT = 3,
  /**
   * A verification ran and failed.
   */
  QK_STATUS_CHECK_FAILED = 4,
  /**
   * Index outside the computed range.
   */
  QK_STATUS_OUT_OF_RANGE = 5,
  /**
   * A panic was caught at the boundary.
   */
  QK_STATUS_INTERNAL = 6,
} QkStatus;

/**
 * A built Krall construction.
 */
typedef struct QkConstruction QkConstruction;

/**
 * A polynomial family.
 */
typedef struct QkFamily QkFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *qk_last_error(void);

/**
 * Library version, a static string.
 */
const char *qk_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void qk_string_free(char *s);

/**
 * Builds a family from a config such as
 * `{"family":"q-meixner","q":"2/5","b":"1/3","c":"3/2"}`.
 *
 * # Safety
 * `config_json` must be a nul-terminated string; `out` must be writable.
 */
enum QkStatus qk_family_new(const char *config_json, struct QkFamily **out);

/**
 * Writes `p_n` as a JSON array of `"num/den"` coefficients, lowest degree first.
 *
 * # Safety
 * `family` must be a live handle; `out` must be writable.
 */
enum QkStatus qk_family_poly_json(const struct QkFamily *family, uintptr_t n, char **out);

/**
 * # Safety
 * `family` must come from [`qk_family_new`] and not be used afterwards.
 */
void qk_family_free(struct QkFamily *family);

/**
 * Builds a theorem construction for `n ≤ upto`, e.g. from
 * `{"theorem":"meixner-i","k":2}`.
 *
 * # Safety
 * `config_json` must be a nul-terminated string; `out` must be writable.
 */
enum QkStatus qk_construction_new(const char *config_json,
                                  uintptr_t upto,
                                  struct QkConstruction **out);

/**
 * `P₂, P₁, γ, λ, β, q_n` and `D^Q` as JSON.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum QkStatus qk_construction_summary_json(const struct QkConstruction *c, char **out);

/**
 * `q_n` as a JSON coefficient array.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum QkStatus qk_construction_q_poly_json(const struct QkConstruction *c, uintptr_t n, char **out);

/**
 * Checks the eigen equation for `n ≤ upto` and the operator order.
 * Returns `QK_STATUS_CHECK_FAILED` when any check fails; `report_out`
 * may be null.
 *
 * # Safety
 * `c` must be a live handle; `report_out` null or writable.
 */
enum QkStatus qk_construction_verify_eigen(const struct QkConstruction *c,
                                           uintptr_t upto,
                                           char **report_out);

/**
 * # Safety
 * `c` must come from [`qk_construction_new`] and not be used afterwards.
 */
void qk_construction_free(struct QkConstruction *c);

/**
 * Runs a command-line suite (`"verify-eigen"`, `"conjecture-a"`, ...)
 * and writes its JSON report. `QK_STATUS_CHECK_FAILED` still produces a
 * report.
 *
 * # Safety
 * String arguments must be nul-terminated; `report_out` must be writable.
 */
enum QkStatus qk_run_suite(const char *command, const char *config_json, char **report_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QKRALL_H */
