#ifndef CGEDIT_H
#define CGEDIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Editing methods selectable through the C ABI.
 */
typedef enum CgeditMethod {
  BruteForce = 0,
  Exact = 1,
  Greedy = 2,
  GreedyRand = 3,
  RandomPair = 4,
} CgeditMethod;

/**
 * Status codes returned by every fallible function.
 */
typedef enum CgeditStatus {
  /**
   * The call succeeded.
   */
  Ok = 0,
  /**
   * A pointer argument was null.
   */
  NullArgument = 1,
  /**
   * An edge endpoint was out of range or a self-loop.
   */
  InvalidEdge = 2,
  /**
   * The graph was empty or otherwise outside a method's bounds.
   */
  Unsupported = 3,
  /**
   * An internal invariant failed while editing.
   */
  EditFailed = 4,
} CgeditStatus;

/**
 * An opaque simple undirected graph.
 */
typedef struct CgeditGraph CgeditGraph;

/**
 * An edit set as a flat pair array: entries `2i` and `2i + 1` are the
 * endpoints of the i-th flipped pair, sorted. Free with
 * `cgedit_edits_free`.
 */
typedef struct CgeditEdits {
  uint32_t *pairs;
  uintptr_t len;
} CgeditEdits;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a graph on `n` vertices from `m` edges given as a flat
 * `[u0, v0, u1, v1, ...]` array. On success writes the handle to `out`.
 *
 * # Safety
 * `edges` must point to `2 * m` readable `u32`s (or be null when `m` is 0)
 * and `out` must be a valid pointer.
 */
enum CgeditStatus cgedit_graph_new(uintptr_t n,
                                   const uint32_t *edges,
                                   uintptr_t m,
                                   struct CgeditGraph **out);

/**
 * Releases a graph handle. Null is a no-op.
 *
 * # Safety
 * `g` must be a handle from `cgedit_graph_new` not yet freed.
 */
void cgedit_graph_free(struct CgeditGraph *g);

/**
 * Writes 1 to `out` if the graph is a cograph, else 0 and, when `witness`
 * is non-null, the four vertices of an induced P4 (path order).
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid; `witness`, if non-null,
 * must point to four writable `u32`s.
 */
enum CgeditStatus cgedit_is_cograph(const struct CgeditGraph *g, int *out, uint32_t *witness);

/**
 * Serializes the modular decomposition tree as a NUL-terminated string in
 * the `S(...)` / `P(...)` / `PR(...)` format. Free with
 * `cgedit_string_free`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum CgeditStatus cgedit_mdtree_string(const struct CgeditGraph *g, char **out);

/**
 * Releases a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cgedit_string_free(char *s);

/**
 * Computes a cograph edit set with the chosen method; `seed` feeds the
 * randomized methods and is ignored otherwise. On success writes the pair
 * array to `out` and the cost to `cost`.
 *
 * # Safety
 * `g` must be a live handle; `out` and `cost` must be valid pointers.
 */
enum CgeditStatus cgedit_edit(const struct CgeditGraph *g,
                              enum CgeditMethod method,
                              uint64_t seed,
                              struct CgeditEdits *out,
                              uintptr_t *cost);

/**
 * Releases an edit-set buffer. A null or empty buffer is a no-op.
 *
 * # Safety
 * `e`, if non-null, must hold a buffer returned by `cgedit_edit` that has
 * not been freed.
 */
void cgedit_edits_free(struct CgeditEdits *e);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CGEDIT_H */
