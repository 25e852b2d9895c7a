#ifndef LIEODE_H
#define LIEODE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LieodeStatus {
  LIEODE_STATUS_OK = 0,
  LIEODE_STATUS_NULL_POINTER = 1,
  LIEODE_STATUS_INVALID_ARGUMENT = 2,
  LIEODE_STATUS_INVALID_UTF8 = 3,
  LIEODE_STATUS_COMPUTATION_FAILED = 4,
  LIEODE_STATUS_PANIC = 5,
} LieodeStatus;

/**
 * Structure constants of the point symmetry basis.
 */
typedef struct LieodePresentation LieodePresentation;

/**
 * A normal-form linear system with its coefficient ring.
 */
typedef struct LieodeSystem LieodeSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Owned by the
 * library and valid until the next call on the same thread.
 */
const char *lieode_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void lieode_string_free(char *s);

/**
 * Builds the normal form of order `n` with `m` components. A null `q`
 * keeps `q(x)` abstract; otherwise it is parsed as a polynomial in `x`.
 *
 * # Safety
 * `q` is null or a NUL-terminated string; `out` is writable.
 */
enum LieodeStatus lieode_system_new(size_t n, size_t m, const char *q, struct LieodeSystem **out);

/**
 * # Safety
 * `sys` is null or a live handle from [`lieode_system_new`].
 */
void lieode_system_free(struct LieodeSystem *sys);

/**
 * `A[j]` of the normal form, `2 <= j <= n`, as a string.
 *
 * # Safety
 * `sys` is a live handle; `out` is writable.
 */
enum LieodeStatus lieode_system_coefficient(const struct LieodeSystem *sys, size_t j, char **out);

/**
 * Sets `*out` to whether the named generator (e.g. `"F_p"`, `"S_1,2"`) is a
 * point symmetry of the system.
 *
 * # Safety
 * `sys` is a live handle; `label` is NUL-terminated; `out` is writable.
 */
enum LieodeStatus lieode_is_symmetry(const struct LieodeSystem *sys, const char *label, bool *out);

/**
 * Variational and divergence classification as JSON.
 *
 * # Safety
 * `sys` is a live handle; `out` is writable.
 */
enum LieodeStatus lieode_classify_json(const struct LieodeSystem *sys, char **out);

/**
 * Numeric flow check on `[0, 1]` with default tolerances. Requires a
 * polynomial `q`.
 *
 * # Safety
 * `sys` is a live handle; `out` is writable.
 */
enum LieodeStatus lieode_numcheck_json(const struct LieodeSystem *sys, char **out);

/**
 * Computes the structure constants of the point symmetry basis.
 *
 * # Safety
 * `sys` is a live handle; `out` is writable.
 */
enum LieodeStatus lieode_presentation_new(const struct LieodeSystem *sys,
                                          struct LieodePresentation **out);

/**
 * # Safety
 * `pres` is null or a live handle from [`lieode_presentation_new`].
 */
void lieode_presentation_free(struct LieodePresentation *pres);

/**
 * # Safety
 * `pres` is a live handle; `out` is writable.
 */
enum LieodeStatus lieode_presentation_dim(const struct LieodePresentation *pres, size_t *out);

/**
 * Bracket table as JSON: `{"basis": [...], "brackets": [{"i", "j", "terms"}]}`.
 *
 * # Safety
 * `pres` is a live handle; `out` is writable.
 */
enum LieodeStatus lieode_presentation_table_json(const struct LieodePresentation *pres, char **out);

/**
 * Levi decomposition certificate as JSON. Only defined for `n >= 3`.
 *
 * # Safety
 * `pres` is a live handle; `out` is writable.
 */
enum LieodeStatus lieode_levi_json(const struct LieodePresentation *pres, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LIEODE_H */
