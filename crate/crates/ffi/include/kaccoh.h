#ifndef KACCOH_H
#define KACCOH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum {
  KAC_STATUS_OK = 0,
  KAC_STATUS_NULL_POINTER = 1,
  KAC_STATUS_INVALID_UTF8 = 2,
  /**
   * malformed input document or unknown name
   */
  KAC_STATUS_SCHEMA = 3,
  /**
   * well-formed input that is not a valid group or matched pair
   */
  KAC_STATUS_INVALID_INPUT = 4,
  KAC_STATUS_BUDGET_EXCEEDED = 5,
  KAC_STATUS_COMPUTE = 6,
  KAC_STATUS_OUT_OF_RANGE = 7,
  KAC_STATUS_PANIC = 8,
} KacStatus;

/**
 * A cohomology group as free rank, torus rank and torsion orders.
 */
typedef struct KacGroup KacGroup;

/**
 * A validated matched pair.
 */
typedef struct KacPair KacPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after success. Owned by the
 * library and valid until the next call on the same thread.
 */
const char *kac_last_error(void);

/**
 * Parses a matched-pair JSON document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out_pair` a valid pointer.
 */
KacStatus kac_pair_from_json(const char *json, KacPair **out_pair);

/**
 * One of the built-in pairs: `z6`, `z2xz2`, `s3`, `d4`, `z12`.
 *
 * # Safety
 * `name` must be a nul-terminated string and `out_pair` a valid pointer.
 */
KacStatus kac_pair_fixture(const char *name, KacPair **out_pair);

/**
 * # Safety
 * `pair` must come from this library and not be used afterwards; null is ignored.
 */
void kac_pair_free(KacPair *pair);

/**
 * `|G|`, `|G1|` and `|G2|`.
 *
 * # Safety
 * `pair` must be a live handle; out-pointers must be valid.
 */
KacStatus kac_pair_orders(const KacPair *pair, size_t *order, size_t *g1, size_t *g2);

/**
 * `H^degree(complex; coeff)`. `complex` is a kind name such as `kac_C`; `coeff` is `Z`,
 * `Zm:m` or `T`. `budget` bounds the basis of a single block (0 for the default).
 *
 * # Safety
 * `pair` must be a live handle, strings nul-terminated, `out_group` valid.
 */
KacStatus kac_cohomology(const KacPair *pair,
                         const char *complex,
                         const char *coeff,
                         int32_t degree,
                         uint64_t budget,
                         KacGroup **out_group);

/**
 * # Safety
 * `group` must come from this library and not be used afterwards; null is ignored.
 */
void kac_group_free(KacGroup *group);

/**
 * Free rank, torus rank and number of torsion summands.
 *
 * # Safety
 * `group` must be a live handle; out-pointers must be valid.
 */
KacStatus kac_group_shape(const KacGroup *group,
                          size_t *free_rank,
                          size_t *torus_rank,
                          size_t *torsion_len);

/**
 * Order of torsion summand `i` (invariant factors in increasing divisibility order).
 *
 * # Safety
 * `group` must be a live handle and `order` valid.
 */
KacStatus kac_group_torsion(const KacGroup *group, size_t i, uint64_t *order);

/**
 * Exactness of the Kac sequence through degree `through`.
 *
 * # Safety
 * `pair` must be a live handle, `coeff` nul-terminated, `exact` valid.
 */
KacStatus kac_sequence_exact(const KacPair *pair,
                             const char *coeff,
                             size_t through,
                             uint64_t budget,
                             bool *exact);

/**
 * Runs a command-line invocation (`argv[0]` is the program name) and returns the JSON
 * report and the exit code the command-line tool would use. On input, budget or compute
 * errors the status is nonzero and no report is produced.
 *
 * # Safety
 * `argv` must hold `argc` nul-terminated strings; out-pointers must be valid.
 */
KacStatus kac_run(size_t argc, const char *const *argv, char **report_json, int32_t *exit_code);

/**
 * # Safety
 * `s` must be a string returned by this library, or null.
 */
void kac_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KACCOH_H */
