#ifndef PRODPERC_H
#define PRODPERC_H

/* Generated by cbindgen from prodperc-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum PpStatus {
  PP_STATUS_OK = 0,
  // A required pointer argument was null.
  PP_STATUS_NULL_POINTER = 1,
  // Malformed graph expression or base graph.
  PP_STATUS_INVALID_BASE = 2,
  // Argument outside its documented domain.
  PP_STATUS_INVALID_ARGUMENT = 3,
  // Handles belong to different graphs.
  PP_STATUS_GRAPH_MISMATCH = 4,
  // A resource guard refused the operation at this scale.
  PP_STATUS_GUARD = 5,
  // The requested structure does not exist at this scale.
  PP_STATUS_UNSATISFIABLE = 6,
  // I/O failure.
  PP_STATUS_IO = 7,
  // A panic was caught at the boundary.
  PP_STATUS_INTERNAL = 8,
} PpStatus;

// Opaque product graph.
typedef struct PpGraph PpGraph;

// Opaque component labeling.
typedef struct PpLabeling PpLabeling;

// Opaque percolation sample.
typedef struct PpSample PpSample;

// Headline numbers of the largest component.
typedef struct PpGiantStats {
  uint64_t n;
  uint64_t giant_size;
  double fraction;
  uint64_t second_size;
  uint64_t giant_edges;
  uint64_t excess;
} PpGiantStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for this thread's most recent failure. The pointer stays
// valid until the next failing call on the same thread; never freed by
// the caller.
const char *pp_last_error(void);

// Builds the product graph named by `expr` (for example `"Q14"` or
// `"K4xC9^2"`) and writes a handle through `out`.
enum PpStatus pp_graph_build(const char *expr, struct PpGraph **out);

void pp_graph_free(struct PpGraph *graph);

// Number of vertices.
uint64_t pp_graph_n(const struct PpGraph *graph);

// Number of edges.
uint64_t pp_graph_edge_count(const struct PpGraph *graph);

// Number of product factors.
size_t pp_graph_dimension(const struct PpGraph *graph);

// Common degree, or -1 when the product is irregular.
int64_t pp_graph_degree(const struct PpGraph *graph);

// Samples bond percolation: edge `i` survives iff the seeded counter
// stream assigns it a value below `p`. Identical `(graph, p, seed)`
// triples reproduce the identical sample.
enum PpStatus pp_percolate(const struct PpGraph *graph,
                           double p,
                           uint64_t seed,
                           struct PpSample **out);

void pp_sample_free(struct PpSample *sample);

// Number of retained edges.
uint64_t pp_sample_retained_count(const struct PpSample *sample);

// Whether the product edge `{u, v}` exists and survived.
bool pp_sample_retained_pair(const struct PpSample *sample, uint64_t u, uint64_t v);

// Labels the connected components of a sample.
enum PpStatus pp_label_components(const struct PpSample *sample, struct PpLabeling **out);

void pp_labeling_free(struct PpLabeling *labeling);

// Number of components.
size_t pp_labeling_component_count(const struct PpLabeling *labeling);

// Component id of vertex `v`.
uint32_t pp_labeling_component_of(const struct PpLabeling *labeling, uint64_t v);

// Fills `stats` with the largest component's headline numbers.
enum PpStatus pp_labeling_giant_stats(const struct PpLabeling *labeling,
                                      struct PpGiantStats *stats);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRODPERC_H */
