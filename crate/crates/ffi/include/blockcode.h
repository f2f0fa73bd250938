#ifndef BLOCKCODE_H
#define BLOCKCODE_H

/* Generated by cbindgen from the blockcode-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Möbius convention for `bc_check`.
typedef enum BcMuMode {
  BC_MU_MODE_STANDARD = 0,
  BC_MU_MODE_LITERAL = 1,
} BcMuMode;

// Result of every call.
typedef enum BcStatus {
  // Pass, verified, or plain success.
  BC_STATUS_OK = 0,
  // The check ran and the answer is negative.
  BC_STATUS_REFUTED = 1,
  BC_STATUS_NULL_ARGUMENT = 2,
  BC_STATUS_INVALID_UTF8 = 3,
  BC_STATUS_SYNTAX_ERROR = 4,
  BC_STATUS_VALIDATION_ERROR = 5,
  BC_STATUS_CLOSURE_DIVERGENCE = 6,
  BC_STATUS_CYCLE_ERROR = 7,
  BC_STATUS_CRITERION_VIOLATED = 8,
  BC_STATUS_CONSTRUCTION_FAILURE = 9,
  BC_STATUS_ALIGNMENT_FAILURE = 10,
  BC_STATUS_OTHER_ERROR = 11,
  BC_STATUS_PANIC = 12,
} BcStatus;

// Opaque parsed representation.
typedef struct BcRepresentation BcRepresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a representation from NUL-terminated JSON. On success `*out`
// receives a handle to release with `bc_representation_free`.
//
// # Safety
// `json` must be a valid C string and `out` a valid pointer.
enum BcStatus bc_representation_parse(const char *json, struct BcRepresentation **out);

// # Safety
// `rep` must come from `bc_representation_parse` and not be used again.
void bc_representation_free(struct BcRepresentation *rep);

// Number of objects, or 0 for a null handle.
//
// # Safety
// `rep` must be null or a live handle.
uintptr_t bc_representation_object_count(const struct BcRepresentation *rep);

// Criterion report. Returns `Ok` on pass and `Refuted` on fail.
//
// # Safety
// `rep` must be a live handle and `out` a valid pointer.
enum BcStatus bc_check(const struct BcRepresentation *rep, enum BcMuMode mu, char **out);

// Flag report. Zero limits select the defaults.
//
// # Safety
// `rep` must be a live handle and `out` a valid pointer.
enum BcStatus bc_flag(const struct BcRepresentation *rep,
                      uintptr_t max_rounds,
                      uintptr_t max_elements,
                      char **out);

// Decomposition certificate.
//
// # Safety
// `rep` must be a live handle and `out` a valid pointer.
enum BcStatus bc_decompose(const struct BcRepresentation *rep, char **out);

// Verifies a certificate given as JSON. Returns `Ok` or `Refuted`.
//
// # Safety
// `rep` must be a live handle, `certificate` a valid C string, and `out`
// a valid pointer.
enum BcStatus bc_verify(const struct BcRepresentation *rep, const char *certificate, char **out);

// Pseudo-inverses and the inverse-category axiom report. Returns
// `Refuted` if an axiom fails.
//
// # Safety
// `rep` must be a live handle and `out` a valid pointer.
enum BcStatus bc_envelope(const struct BcRepresentation *rep, char **out);

// Möbius tables of every object's flag poset.
//
// # Safety
// `rep` must be a live handle and `out` a valid pointer.
enum BcStatus bc_mobius(const struct BcRepresentation *rep, char **out);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a string from this library, not freed before.
void bc_string_free(char *s);

// Message of the last error on this thread, or null. The pointer stays
// valid until the next call into this library on the same thread.
const char *bc_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLOCKCODE_H */
