#ifndef HEAPKIT_H
#define HEAPKIT_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HeapkitStatus {
  HEAPKIT_STATUS_OK = 0,
  /**
   * The call succeeded and the verdict is negative; the output JSON holds
   * the witness.
   */
  HEAPKIT_STATUS_NEGATIVE = 1,
  HEAPKIT_STATUS_INVALID_INPUT = 2,
  HEAPKIT_STATUS_NULL_POINTER = 3,
  HEAPKIT_STATUS_INVALID_UTF8 = 4,
  HEAPKIT_STATUS_CAP_EXCEEDED = 5,
  HEAPKIT_STATUS_PANIC = 6,
} HeapkitStatus;

/**
 * A validated periodic full heap.
 */
typedef struct HeapkitHeap HeapkitHeap;

/**
 * A validated finite colored poset.
 */
typedef struct HeapkitPoset HeapkitPoset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next heapkit call on the same thread.
 */
const char *heapkit_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void heapkit_string_free(char *s);

/**
 * Parses a poset document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a writable pointer.
 */
enum HeapkitStatus heapkit_poset_from_json(const char *json, struct HeapkitPoset **out);

/**
 * # Safety
 * `p` must be null or a handle from `heapkit_poset_from_json`, not yet freed.
 */
void heapkit_poset_free(struct HeapkitPoset *p);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live poset handle.
 */
size_t heapkit_poset_len(const struct HeapkitPoset *p);

/**
 * Writes whether the poset is d-complete.
 *
 * # Safety
 * `p` must be a live poset handle and `out` writable.
 */
enum HeapkitStatus heapkit_is_d_complete(const struct HeapkitPoset *p, bool *out);

/**
 * Classification JSON. Returns `HEAPKIT_STATUS_NEGATIVE` when the poset is
 * not d-complete; the JSON is written either way.
 *
 * # Safety
 * `p` must be a live poset handle and `out` writable.
 */
enum HeapkitStatus heapkit_classify(const struct HeapkitPoset *p, char **out);

/**
 * Canonical key as lowercase hex.
 *
 * # Safety
 * `p` must be a live poset handle and `out` writable.
 */
enum HeapkitStatus heapkit_canonical_key(const struct HeapkitPoset *p, char **out);

/**
 * Representation certificate JSON; negative when the split space carries
 * no upper minuscule representation. `cap` bounds the split count.
 *
 * # Safety
 * `p` must be a live poset handle and `out` writable.
 */
enum HeapkitStatus heapkit_rep_verify(const struct HeapkitPoset *p, size_t cap, char **out);

/**
 * The least dominant weight as a JSON array in diagram color order.
 *
 * # Safety
 * `p` must be a live poset handle and `out` writable.
 */
enum HeapkitStatus heapkit_weyl_lambda(const struct HeapkitPoset *p, char **out);

/**
 * `"cycle:N"` or `"alternating_a1"`.
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` writable.
 */
enum HeapkitStatus heapkit_heap_builtin(const char *name, struct HeapkitHeap **out);

/**
 * Parses a heap document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum HeapkitStatus heapkit_heap_from_json(const char *json, struct HeapkitHeap **out);

/**
 * # Safety
 * `h` must be null or a live heap handle.
 */
void heapkit_heap_free(struct HeapkitHeap *h);

/**
 * Infinite-axiom report for a filter document; negative when the filter
 * is not d-complete.
 *
 * # Safety
 * `h` must be a live heap handle, `filter_json` a nul-terminated string and
 * `out` writable.
 */
enum HeapkitStatus heapkit_filter_check(const struct HeapkitHeap *h,
                                        const char *filter_json,
                                        char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEAPKIT_H */
