#ifndef GCA_H
#define GCA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GcaAdjoinMode {
  GCA_ADJOIN_MODE_TOTAL = 0,
  GCA_ADJOIN_MODE_LCM = 1,
} GcaAdjoinMode;

typedef enum GcaStatus {
  GCA_STATUS_OK = 0,
  GCA_STATUS_NULL_POINTER = 1,
  GCA_STATUS_INVALID_UTF8 = 2,
  GCA_STATUS_PARSE = 3,
  GCA_STATUS_OUT_OF_RANGE = 4,
  GCA_STATUS_COMPUTATION = 5,
  GCA_STATUS_MISMATCH = 6,
  GCA_STATUS_PANIC = 7,
} GcaStatus;

// An immutable generalized seed.
typedef struct GcaSeed GcaSeed;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message of the last failed call on this thread, or null. The pointer
// stays valid until the next call into this library on the same thread.
const char *gca_last_error(void);

// Loads a bundled fixture by name (`FIX-A`, `FIX-B`, `FIX-C`).
//
// # Safety
// `name` must be a nul-terminated string and `out` a writable pointer.
enum GcaStatus gca_seed_fixture(const char *name, struct GcaSeed **out);

// Parses a seed from its text form.
//
// # Safety
// `source` must be a nul-terminated string and `out` a writable pointer.
enum GcaStatus gca_seed_parse(const char *source, struct GcaSeed **out);

// Releases a seed. Null is ignored.
//
// # Safety
// `seed` must come from this library and must not be used afterwards.
void gca_seed_free(struct GcaSeed *seed);

// Number of mutable indices.
//
// # Safety
// `seed` must be a live handle and `out` a writable pointer.
enum GcaStatus gca_seed_rank(const struct GcaSeed *seed, uintptr_t *out);

// Mutates at the zero-based index `k` into a new handle.
//
// # Safety
// `seed` must be a live handle and `out` a writable pointer.
enum GcaStatus gca_seed_mutate(const struct GcaSeed *seed, uintptr_t k, struct GcaSeed **out);

// The canonical text form of the seed.
//
// # Safety
// `seed` must be a live handle and `out` a writable pointer.
enum GcaStatus gca_seed_to_text(const struct GcaSeed *seed, char **out);

// Cluster variable `k` (zero-based) in canonical text form.
//
// # Safety
// `seed` must be a live handle and `out` a writable pointer.
enum GcaStatus gca_seed_cluster_variable(const struct GcaSeed *seed, uintptr_t k, char **out);

// Exchange matrix entry `(i, j)`.
//
// # Safety
// `seed` must be a live handle and `out` a writable pointer.
enum GcaStatus gca_seed_matrix_entry(const struct GcaSeed *seed,
                                     uintptr_t i,
                                     uintptr_t j,
                                     int64_t *out);

// The unfolded matrix with its group header, as text.
//
// # Safety
// `seed` must be a live handle and `out` a writable pointer.
enum GcaStatus gca_seed_unfold(const struct GcaSeed *seed, enum GcaAdjoinMode mode, char **out);

// Adjoins roots of every frozen variable into a new handle.
//
// # Safety
// `seed` must be a live handle and `out` a writable pointer.
enum GcaStatus gca_seed_adjoin(const struct GcaSeed *seed,
                               enum GcaAdjoinMode mode,
                               struct GcaSeed **out);

// Runs a verification target (`hadamard`, `laurent`, ...) over all
// sequences of length `depth` and stores the number of failing cases.
// Returns `GCA_STATUS_MISMATCH` when that number is positive.
//
// # Safety
// `seed` must be a live handle, `target` a nul-terminated string and
// `mismatches` a writable pointer.
enum GcaStatus gca_verify(const struct GcaSeed *seed,
                          const char *target,
                          uintptr_t depth,
                          enum GcaAdjoinMode mode,
                          uintptr_t *mismatches);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and must not be used afterwards.
void gca_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GCA_H */
