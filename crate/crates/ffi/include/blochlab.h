#ifndef BLOCHLAB_H
#define BLOCHLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. The numeric values match the command-line exit codes where
// both exist.
typedef enum BlStatus {
  BL_STATUS_OK = 0,
  // A verification ran and failed, or was inconclusive.
  BL_STATUS_FAIL = 1,
  // A spec, suite name or argument did not parse.
  BL_STATUS_PARSE = 2,
  // A budget was exceeded.
  BL_STATUS_BUDGET = 3,
  BL_STATUS_NULL_ARGUMENT = 4,
  // A panic or other internal error.
  BL_STATUS_INTERNAL = 5,
} BlStatus;

// A built finite ring.
typedef struct BlRing BlRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Tool name and version, a static string.
const char *bl_version(void);

// Message for the last failing call on this thread, or null.
const char *bl_last_error(void);

// Parses and builds a ring such as `gf:4` or `zmod:9`.
//
// # Safety
// `spec` must be a nul-terminated string and `out` a valid pointer.
enum BlStatus bl_ring_new(const char *spec, struct BlRing **out);

// # Safety
// `ring` must come from `bl_ring_new` and not be used afterwards. Null is ignored.
void bl_ring_free(struct BlRing *ring);

// Number of elements, or 0 for a null handle.
//
// # Safety
// `ring` must be null or a live handle.
uintptr_t bl_ring_size(const struct BlRing *ring);

// Number of units, or 0 for a null handle.
//
// # Safety
// `ring` must be null or a live handle.
uintptr_t bl_ring_unit_count(const struct BlRing *ring);

// Full Bloch-group report for a ring, as JSON. Returns `Fail` when some
// certificate fails; the JSON is written either way.
//
// # Safety
// `ring` must be a live handle and `out` a valid pointer.
enum BlStatus bl_bloch_report(const struct BlRing *ring, char **out);

// Runs one suite on one target and writes `{verdict, summary, certificate}`.
// Zero budgets select the defaults.
//
// # Safety
// `suite` and `target` must be nul-terminated strings and `out` a valid pointer.
enum BlStatus bl_verify(const char *suite,
                        const char *target,
                        uint64_t tuple_budget,
                        uint64_t solve_budget,
                        uintptr_t max_torus,
                        uint64_t seed,
                        char **out);

// Homology of a group spec in one degree, with `Z/modulus` coefficients or
// integral ones when `modulus` is 0.
//
// # Safety
// `group` must be a nul-terminated string and `out` a valid pointer.
enum BlStatus bl_homology(const char *group,
                          uintptr_t degree,
                          uint64_t modulus,
                          uint64_t tuple_budget,
                          char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void bl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLOCHLAB_H */
