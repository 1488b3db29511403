/* C interface to the Drinfeld level-structure library. */

#ifndef DRINFELD_H
#define DRINFELD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum DlStatus {
  DlStatus_Ok = 0,
  DlStatus_NullPointer = 1,
  DlStatus_InvalidArgument = 2,
  DlStatus_MathError = 3,
  DlStatus_BadUtf8 = 4,
  DlStatus_BadJson = 5,
} DlStatus;

/**
 * Opaque base-ring handle: B = F_{q^m}[Y]/(Y^k), q = p^s.
 */
typedef struct DlAlgebra DlAlgebra;

/**
 * Opaque Drinfeld-module handle.
 */
typedef struct DlModule DlModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The most recent error message on this thread, or NULL if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *dl_last_error(void);

/**
 * Create a base ring. On success writes a handle to `out`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DlStatus dl_algebra_new(uint64_t p,
                             uintptr_t s,
                             uintptr_t m,
                             uintptr_t k,
                             struct DlAlgebra **out);

/**
 * # Safety
 * `alg` must be a live handle from `dl_algebra_new` or NULL.
 */
void dl_algebra_free(struct DlAlgebra *alg);

/**
 * Number of elements of the base ring; 0 if `alg` is NULL.
 *
 * # Safety
 * `alg` must be a live handle or NULL.
 */
uint64_t dl_algebra_cardinality(const struct DlAlgebra *alg);

/**
 * Number of F_p coordinates per element (s*m*k).
 *
 * # Safety
 * `alg` must be a live handle or NULL.
 */
uintptr_t dl_algebra_coord_len(const struct DlAlgebra *alg);

/**
 * Create a Drinfeld module from `num_coeffs` coefficient vectors
 * gamma(T), c_1, .., c_N, each of `dl_algebra_coord_len` flat F_p
 * coordinates, concatenated in `coeffs`.
 *
 * # Safety
 * `alg` must be a live handle; `coeffs` must point to
 * `num_coeffs * dl_algebra_coord_len(alg)` readable u64 values; `out`
 * must be a valid pointer.
 */
enum DlStatus dl_module_new(const struct DlAlgebra *alg,
                            const uint64_t *coeffs,
                            uintptr_t num_coeffs,
                            struct DlModule **out);

/**
 * # Safety
 * `module` must be a live handle from `dl_module_new` or NULL.
 */
void dl_module_free(struct DlModule *module);

/**
 * Rank of the module; 0 if `module` is NULL.
 *
 * # Safety
 * `module` must be a live handle or NULL.
 */
uintptr_t dl_module_rank(const struct DlModule *module);

/**
 * Evaluate e_a at a point. `a_coeffs` holds deg(a)+1 F_p scalar lists of
 * length s (ascending powers of T); `point` and `result` hold
 * `dl_algebra_coord_len` coordinates each.
 *
 * # Safety
 * All pointers must be valid for the documented lengths.
 */
enum DlStatus dl_module_eval(const struct DlModule *module,
                             const uint64_t *a_coeffs,
                             uintptr_t a_len,
                             const uint64_t *point,
                             uint64_t *result);

/**
 * Run a whole experiment: `command` is one of "torsion", "equivalence",
 * "tangent", "isogeny"; `config_json` is the same JSON document the CLI
 * takes. On success `*out_json` holds the evidence record (JSON), to be
 * released with `dl_string_free`, and `*out_passed` (if non-NULL) is 1
 * when all assertions passed.
 *
 * # Safety
 * `command` and `config_json` must be NUL-terminated strings; `out_json`
 * must be a valid pointer.
 */
enum DlStatus dl_run_experiment(const char *command,
                                const char *config_json,
                                char **out_json,
                                int32_t *out_passed);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from this library or be NULL.
 */
void dl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DRINFELD_H */
