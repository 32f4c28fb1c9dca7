#ifndef CMEIS_H
#define CMEIS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The first four match the exit codes of the `cmeis` binary.
 */
typedef enum CmeisStatus {
  CMEIS_STATUS_OK = 0,
  CMEIS_STATUS_VERIFICATION_FAILED = 1,
  CMEIS_STATUS_INVALID_SETUP = 2,
  CMEIS_STATUS_PRECISION_FAILURE = 3,
  CMEIS_STATUS_NULL_POINTER = 4,
  CMEIS_STATUS_INTERNAL = 5,
} CmeisStatus;

/**
 * Opaque handle to a validated pair of discriminants.
 */
typedef struct CmeisSetup CmeisSetup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Validates `(d1, d2)` and stores a new handle in `*out`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum CmeisStatus cmeis_setup_new(int64_t d1, int64_t d2, struct CmeisSetup **out);

/**
 * Releases a handle from [`cmeis_setup_new`]. Null is ignored.
 *
 * # Safety
 * `setup` must be null or a handle not yet freed.
 */
void cmeis_setup_free(struct CmeisSetup *setup);

/**
 * Writes `D = d1 d2` to `*out`.
 *
 * # Safety
 * `setup` must be a live handle and `out` valid for writing.
 */
enum CmeisStatus cmeis_setup_field_discriminant(const struct CmeisSetup *setup, int64_t *out);

/**
 * Coefficient records for traces `1..=trace_max` as JSON Lines.
 *
 * # Safety
 * `setup` must be a live handle and `out` valid for writing. The string
 * stored in `*out` must be released with [`cmeis_string_free`].
 */
enum CmeisStatus cmeis_coefficients_json(const struct CmeisSetup *setup,
                                         int64_t trace_max,
                                         uint32_t digits,
                                         char **out);

/**
 * `deg T_m` as a JSON object. `digits = 0` selects the default of 30.
 *
 * # Safety
 * As for [`cmeis_coefficients_json`].
 */
enum CmeisStatus cmeis_degree_json(const struct CmeisSetup *setup,
                                   int64_t m,
                                   uint32_t digits,
                                   char **out);

/**
 * The singular-moduli report as a JSON object. `precision_bits = 0` picks the
 * starting precision from the class groups. The report is written even when
 * the identity fails, in which case the status is `VerificationFailed`.
 *
 * # Safety
 * As for [`cmeis_coefficients_json`].
 */
enum CmeisStatus cmeis_singular_moduli_json(const struct CmeisSetup *setup,
                                            uint32_t precision_bits,
                                            char **out);

/**
 * Runs a verification suite by name (`arith`, `field`, `genus`,
 * `eisenstein`, `oracle` or `all`).
 *
 * # Safety
 * `suite` must be a NUL-terminated string.
 */
enum CmeisStatus cmeis_verify(const char *suite, uint64_t seed);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void cmeis_string_free(char *s);

/**
 * Message of the last failed call on this thread, empty after a success.
 * Valid until the next call on the same thread.
 */
const char *cmeis_last_error(void);

/**
 * Library version as a static string.
 */
const char *cmeis_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CMEIS_H */
