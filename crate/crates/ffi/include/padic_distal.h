#ifndef PADIC_DISTAL_H
#define PADIC_DISTAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PdStatus {
  PdStatus_Ok = 0,
  PdStatus_NullPointer = 1,
  PdStatus_InvalidUtf8 = 2,
  PdStatus_Parse = 3,
  PdStatus_Domain = 4,
  PdStatus_Panic = 5,
} PdStatus;

/**
 * Semigroup verdicts, matching the command-line exit codes.
 */
typedef enum PdVerdict {
  PdVerdict_Distal = 0,
  PdVerdict_NonDistal = 3,
  PdVerdict_Inconclusive = 4,
} PdVerdict;

/**
 * Opaque matrix over the p-adic numbers with exact rational entries.
 */
typedef struct PdMatrix PdMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *pd_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void pd_string_free(char *s);

/**
 * Parses `{"p", "n", "rows"}` into a new matrix handle.
 *
 * # Safety
 * `json` must be a valid nul-terminated string and `out` a valid pointer.
 */
enum PdStatus pd_matrix_from_json(const char *json, struct PdMatrix **out);

/**
 * Releases a matrix handle. Null is ignored.
 *
 * # Safety
 * `m` must come from [`pd_matrix_from_json`] and not have been freed already.
 */
void pd_matrix_free(struct PdMatrix *m);

/**
 * Dimension of the matrix, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
uintptr_t pd_matrix_dim(const struct PdMatrix *m);

/**
 * The prime of the matrix, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
uint64_t pd_matrix_prime(const struct PdMatrix *m);

/**
 * Linear and projective distality flags (1 distal, 0 not).
 *
 * # Safety
 * `m` must be a live handle; the out pointers must be valid.
 */
enum PdStatus pd_matrix_distality(const struct PdMatrix *m, int32_t *linear, int32_t *projective);

/**
 * Full analysis report as JSON; `split_precision` > 0 adds the spectral
 * splitting computed from that starting precision.
 *
 * # Safety
 * `m` must be a live handle and `out_json` a valid pointer.
 */
enum PdStatus pd_analyze(const struct PdMatrix *m, uint32_t split_precision, char **out_json);

/**
 * Semigroup distality from `{"p", "n", "generators"}`; writes the verdict
 * code and the JSON report.
 *
 * # Safety
 * `json` must be a valid nul-terminated string; the out pointers must be valid.
 */
enum PdStatus pd_semigroup(const char *json,
                           uint64_t seed,
                           enum PdVerdict *verdict,
                           char **out_json);

/**
 * Non-distal pair for an affine perturbation of the SD form
 * `{"p", "n", "T", "m", "S", "d_exponents"}`, verified for `k_max` periods.
 *
 * # Safety
 * `json` must be a valid nul-terminated string and `out_json` a valid pointer.
 */
enum PdStatus pd_witness(const char *json, uint64_t k_max, char **out_json);

/**
 * Safe translation radius of an SD form as JSON.
 *
 * # Safety
 * `json` must be a valid nul-terminated string and `out_json` a valid pointer.
 */
enum PdStatus pd_safe_radius(const char *json, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PADIC_DISTAL_H */
