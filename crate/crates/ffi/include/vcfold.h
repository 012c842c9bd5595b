#ifndef VCFOLD_H
#define VCFOLD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum VcfoldStatus {
  VCFOLD_STATUS_OK = 0,
  VCFOLD_STATUS_NULL_POINTER = 1,
  VCFOLD_STATUS_INVALID_ARGUMENT = 2,
  VCFOLD_STATUS_DIMENSION_MISMATCH = 3,
  VCFOLD_STATUS_DEGENERATE = 4,
  VCFOLD_STATUS_CONSTRUCTION_FAILURE = 5,
  VCFOLD_STATUS_GUARD_EXCEEDED = 6,
  VCFOLD_STATUS_PARSE = 7,
  /**
   * A verification ran to completion and found counterexamples.
   */
  VCFOLD_STATUS_VERIFICATION_FAILED = 8,
  VCFOLD_STATUS_PANIC = 99,
} VcfoldStatus;

/**
 * A box-family certificate.
 */
typedef struct VcfoldGadget VcfoldGadget;

/**
 * A finite set system over ground set `0..n`, `n <= 64`.
 */
typedef struct VcfoldSetSystem VcfoldSetSystem;

/**
 * A hyperplane set shattered by low-dimensional open simplices.
 */
typedef struct VcfoldSimplexInstance VcfoldSimplexInstance;

/**
 * A point set shattered by unions of restricted half-spaces.
 */
typedef struct VcfoldUnionInstance VcfoldUnionInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread; do not free.
 */
const char *vcfold_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void vcfold_string_free(char *s);

/**
 * Builds a system from `len` bitmasks; bit `i` marks element `i`.
 *
 * # Safety
 * `masks` must point to `len` readable values (or be NULL with `len == 0`);
 * `out` must be writable.
 */
enum VcfoldStatus vcfold_set_system_new(size_t ground_size,
                                        const uint64_t *masks,
                                        size_t len,
                                        struct VcfoldSetSystem **out);

/**
 * Parses `{"ground_size": n, "sets": [[...], ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum VcfoldStatus vcfold_set_system_from_json(const char *json, struct VcfoldSetSystem **out);

/**
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum VcfoldStatus vcfold_set_system_to_json(const struct VcfoldSetSystem *sys, char **out);

/**
 * # Safety
 * `sys` must be NULL or a handle not yet freed.
 */
void vcfold_set_system_free(struct VcfoldSetSystem *sys);

/**
 * Ground size, or 0 for NULL.
 *
 * # Safety
 * `sys` must be NULL or a live handle.
 */
size_t vcfold_set_system_ground_size(const struct VcfoldSetSystem *sys);

/**
 * Number of member sets, or 0 for NULL.
 *
 * # Safety
 * `sys` must be NULL or a live handle.
 */
size_t vcfold_set_system_len(const struct VcfoldSetSystem *sys);

/**
 * Copies up to `cap` member masks, in canonical order, into `buf`.
 * `*written` receives the number copied.
 *
 * # Safety
 * `buf` must have room for `cap` values; `written` must be writable.
 */
enum VcfoldStatus vcfold_set_system_masks(const struct VcfoldSetSystem *sys,
                                          uint64_t *buf,
                                          size_t cap,
                                          size_t *written);

/**
 * VC-dimension and the lexicographically smallest shattered set of that
 * size, as a bitmask.
 *
 * # Safety
 * `sys` must be a live handle; `dim` must be writable; `witness` may be NULL.
 */
enum VcfoldStatus vcfold_set_system_vc_dim(const struct VcfoldSetSystem *sys,
                                           size_t *dim,
                                           uint64_t *witness);

/**
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum VcfoldStatus vcfold_set_system_k_fold_union(const struct VcfoldSetSystem *sys,
                                                 size_t k,
                                                 struct VcfoldSetSystem **out);

/**
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum VcfoldStatus vcfold_set_system_k_fold_intersection(const struct VcfoldSetSystem *sys,
                                                        size_t k,
                                                        struct VcfoldSetSystem **out);

/**
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum VcfoldStatus vcfold_set_system_complement(const struct VcfoldSetSystem *sys,
                                               struct VcfoldSetSystem **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum VcfoldStatus vcfold_gadget_from_json(const char *json, struct VcfoldGadget **out);

/**
 * The certificate shipped for `(n, dim)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum VcfoldStatus vcfold_gadget_bundled(size_t n, size_t dim, struct VcfoldGadget **out);

/**
 * # Safety
 * `g` must be NULL or a handle not yet freed.
 */
void vcfold_gadget_free(struct VcfoldGadget *g);

/**
 * Re-verifies every subset from scratch. Returns `Ok` when all pass and
 * `VerificationFailed` otherwise; `report` (may be NULL) receives a JSON
 * summary either way.
 *
 * # Safety
 * `g` must be a live handle; `report` must be NULL or writable.
 */
enum VcfoldStatus vcfold_gadget_verify(const struct VcfoldGadget *g, char **report);

/**
 * Builds the union instance for even `d >= 4` and `k >= 2`. With a NULL
 * `gadget`, the bundled certificate of the right order is used.
 *
 * # Safety
 * `gadget` must be NULL or a live handle; `out` must be writable.
 */
enum VcfoldStatus vcfold_union_instance_build(size_t d,
                                              size_t k,
                                              const struct VcfoldGadget *gadget,
                                              struct VcfoldUnionInstance **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum VcfoldStatus vcfold_union_instance_from_json(const char *json,
                                                  struct VcfoldUnionInstance **out);

/**
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum VcfoldStatus vcfold_union_instance_to_json(const struct VcfoldUnionInstance *inst, char **out);

/**
 * Number of points, or 0 for NULL.
 *
 * # Safety
 * `inst` must be NULL or a live handle.
 */
size_t vcfold_union_instance_len(const struct VcfoldUnionInstance *inst);

/**
 * # Safety
 * `inst` must be NULL or a handle not yet freed.
 */
void vcfold_union_instance_free(struct VcfoldUnionInstance *inst);

/**
 * Exhaustive verification; `report` (may be NULL) receives the JSON result.
 * Returns `VerificationFailed` when some subset has no witness.
 *
 * # Safety
 * `inst` must be a live handle; `report` must be NULL or writable.
 */
enum VcfoldStatus vcfold_union_instance_verify(const struct VcfoldUnionInstance *inst,
                                               char **report);

/**
 * Dualizes a union instance.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum VcfoldStatus vcfold_simplex_instance_from_union(const struct VcfoldUnionInstance *inst,
                                                     struct VcfoldSimplexInstance **out);

/**
 * # Safety
 * `inst` must be NULL or a handle not yet freed.
 */
void vcfold_simplex_instance_free(struct VcfoldSimplexInstance *inst);

/**
 * Exhaustive verification of the simplex instance; also fails if any
 * vertex sign evaluates to zero.
 *
 * # Safety
 * `inst` must be a live handle; `report` must be NULL or writable.
 */
enum VcfoldStatus vcfold_simplex_instance_verify(const struct VcfoldSimplexInstance *inst,
                                                 char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VCFOLD_H */
