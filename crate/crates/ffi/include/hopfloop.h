#ifndef HOPFLOOP_H
#define HOPFLOOP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes, aligned with the `hopfloop` command-line exit codes.
typedef enum HlStatus {
  HL_STATUS_OK = 0,
  HL_STATUS_MISMATCH = 1,
  HL_STATUS_USAGE = 2,
  HL_STATUS_RESOURCE_LIMIT = 3,
  HL_STATUS_MODEL_INVALID = 4,
  HL_STATUS_NULL_POINTER = 5,
  HL_STATUS_INVALID_UTF8 = 6,
  HL_STATUS_PANIC = 7,
} HlStatus;

// Weighted connected graphs of one cell, vertex order forgotten.
typedef struct HlGraphSum HlGraphSum;

// A validated finite model.
typedef struct HlModel HlModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *hl_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void hl_string_free(char *s);

// Generates the connected graphs with `loops` loops, `vertices` vertices and
// the comma-separated `externals` (empty string for vacuum graphs).
//
// `min_valence = k > 0` keeps only graphs whose vertices all have valence
// above `k`, pruning the recursion accordingly.
//
// # Safety
// `externals` must be a NUL-terminated string; `out` must be writable.
enum HlStatus hl_generate(size_t loops,
                          size_t vertices,
                          const char *externals,
                          size_t min_valence,
                          struct HlGraphSum **out);

// Number of graphs in a sum; 0 for null.
//
// # Safety
// `sum` must be null or a live handle.
size_t hl_graph_sum_len(const struct HlGraphSum *sum);

// Weight of the `index`-th graph (canonical order) as `num/den`.
//
// # Safety
// `sum` must be a live handle; `out` must be writable.
enum HlStatus hl_graph_sum_weight(const struct HlGraphSum *sum, size_t index, char **out);

// JSON array of graph records (1-based vertices, `num/den` weights).
//
// # Safety
// `sum` must be a live handle; `out` must be writable.
enum HlStatus hl_graph_sum_to_json(const struct HlGraphSum *sum, char **out);

// # Safety
// `sum` must be null or a handle from [`hl_generate`] not yet freed.
void hl_graph_sum_free(struct HlGraphSum *sum);

// Parses and validates a model from its JSON text.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum HlStatus hl_model_from_json(const char *json, struct HlModel **out);

// # Safety
// `model` must be null or a handle from [`hl_model_from_json`] not yet freed.
void hl_model_free(struct HlModel *model);

// Connected grade `σ^{l,v}` on the comma-separated `legs`, rendered as an
// exact fraction (rational models) or a decimal (float models).
//
// With `recursive` non-zero the value is computed by the σ-level recursion
// instead of summing generated graphs.
//
// # Safety
// `model` must be a live handle, `legs` a NUL-terminated string and `out`
// writable.
enum HlStatus hl_sigma(const struct HlModel *model,
                       size_t loops,
                       size_t vertices,
                       const char *legs,
                       int32_t recursive,
                       char **out);

// Runs the verification suites up to `max_edges` internal edges.
//
// `suites` is a comma-separated list (`theorem`, `alt-recursion`,
// `series`), or null / empty for all. Returns `HL_STATUS_OK` when every
// check passes and `HL_STATUS_MISMATCH` otherwise. When `report` is not
// null it receives the per-check log.
//
// # Safety
// `suites` must be null or NUL-terminated; `report` must be null or writable.
enum HlStatus hl_verify(size_t max_edges, const char *suites, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOPFLOOP_H */
