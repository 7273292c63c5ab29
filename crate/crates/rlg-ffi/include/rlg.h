/* C interface to the rlg random-regular-graph loop census library. */

#ifndef RLG_H
#define RLG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible FFI call.
typedef enum RlgStatus {
  RLG_STATUS_OK = 0,
  RLG_STATUS_NULL_ARGUMENT = 1,
  RLG_STATUS_INVALID_GRAPH = 2,
  RLG_STATUS_ODD_HALF_EDGES = 3,
  RLG_STATUS_REJECTION_BUDGET = 4,
  RLG_STATUS_BUDGET_EXCEEDED = 5,
  RLG_STATUS_LENGTH_OUT_OF_RANGE = 6,
  RLG_STATUS_SPECTRAL_FAILURE = 7,
  RLG_STATUS_INVALID_JSON = 8,
  RLG_STATUS_INVALID_UTF8 = 9,
  RLG_STATUS_PANIC = 10,
} RlgStatus;

// Opaque handle to an immutable d-regular multigraph.
typedef struct RlgGraph RlgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Build a graph from a half-edge pairing array of length `n * d`.
//
// # Safety
// `pairing` must point to `len` readable `uint64_t`s and `out` must be
// a valid location to store the new handle.
enum RlgStatus rlg_graph_from_pairing(uint32_t d,
                                      uint32_t n,
                                      const uint64_t *pairing,
                                      uintptr_t len,
                                      struct RlgGraph **out);

// Parse a graph from its JSON form `{"d":..,"n":..,"pairing":[..]}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` as above.
enum RlgStatus rlg_graph_from_json(const char *json, struct RlgGraph **out);

// Draw from the configuration model `G(d, n)`. Same `(seed,
// stream_index)` always yields the same graph.
//
// # Safety
// `out` must be a valid location to store the new handle.
enum RlgStatus rlg_graph_sample_configuration(uint32_t d,
                                              uint32_t n,
                                              uint64_t seed,
                                              uint64_t stream_index,
                                              struct RlgGraph **out);

// Draw a uniformly random simple d-regular graph by rejection.
//
// # Safety
// `out` must be a valid location to store the new handle.
enum RlgStatus rlg_graph_sample_uniform_simple(uint32_t d,
                                               uint32_t n,
                                               uint64_t seed,
                                               uint64_t stream_index,
                                               uint64_t max_attempts,
                                               struct RlgGraph **out);

// Release a graph handle. NULL is a no-op.
//
// # Safety
// `g` must have come from this library and not have been freed yet.
void rlg_graph_free(struct RlgGraph *g);

// Degree of the graph, or 0 for NULL.
//
// # Safety
// `g` must be a live handle or NULL.
uint32_t rlg_graph_degree(const struct RlgGraph *g);

// Vertex count of the graph, or 0 for NULL.
//
// # Safety
// `g` must be a live handle or NULL.
uint32_t rlg_graph_vertices(const struct RlgGraph *g);

// Write the self-loop / multi-edge flags of the graph.
//
// # Safety
// All pointers must be valid; `g` must be a live handle.
enum RlgStatus rlg_graph_structure_flags(const struct RlgGraph *g,
                                         bool *has_self_loop,
                                         bool *has_multi_edge);

// Serialize the graph to its JSON form; the string is caller-owned.
//
// # Safety
// `g` must be a live handle and `out` a valid store location.
enum RlgStatus rlg_graph_to_json(const struct RlgGraph *g, char **out);

// Exact loop census at length `k` as JSON with big integers as decimal
// strings: `{"k":..,"n_simp":..,"n_prim":..,"n_tr":..,"n_all":..}`.
// `n_simp` is "0" for `k` above the vertex count.
//
// # Safety
// `g` must be a live handle and `out` a valid store location.
enum RlgStatus rlg_census_json(const struct RlgGraph *g, uint32_t k, char **out);

// Spectral report as JSON, same schema as the CLI `spectrum` command.
//
// # Safety
// `g` must be a live handle and `out` a valid store location.
enum RlgStatus rlg_spectrum_json(const struct RlgGraph *g, uint32_t direct_budget, char **out);

// Exact expected simple-loop count under the configuration model, as
// the string "numerator/denominator".
//
// # Safety
// `out` must be a valid store location.
enum RlgStatus rlg_expected_simple(uint32_t d, uint32_t n, uint32_t k, char **out);

// Release a string returned by this library. NULL is a no-op.
//
// # Safety
// `s` must have come from this library and not have been freed yet.
void rlg_string_free(char *s);

// Static name of a status code.
const char *rlg_status_name(enum RlgStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RLG_H */
