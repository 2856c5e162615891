#ifndef LIEPROBE_H
#define LIEPROBE_H

/* Generated by cbindgen from the lieprobe-capi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which geometry [`lp_generate`] builds. `param` is the projective
 * dimension of the ambient space for the polar families and the series
 * index n for the Grassmann and half-spin families.
 */
typedef enum LpFamily {
  LP_FAMILY_W = 0,
  LP_FAMILY_Q = 1,
  LP_FAMILY_Q_PLUS = 2,
  LP_FAMILY_Q_MINUS = 3,
  LP_FAMILY_GRASSMANN = 4,
  LP_FAMILY_HALF_SPIN = 5,
} LpFamily;

/**
 * Status returned by every fallible entry point. The nonzero values track
 * the CLI exit codes: bad argument 1, unparseable input 2, analysis
 * failure 3, size guard 4; a caught panic is 5.
 */
typedef enum LpStatus {
  LP_STATUS_OK = 0,
  LP_STATUS_ARGUMENT = 1,
  LP_STATUS_PARSE = 2,
  LP_STATUS_ANALYSIS = 3,
  LP_STATUS_TOO_LARGE = 4,
  LP_STATUS_PANIC = 5,
} LpStatus;

/**
 * Opaque graph handle; create with [`lp_graph_from_g6`] or
 * [`lp_generate`], release with [`lp_graph_free`].
 */
typedef struct LpGraph LpGraph;

/**
 * Strongly regular graph parameters. When `is_srg` is 0 the counts are
 * meaningless and set to 0.
 */
typedef struct LpSrgParameters {
  int32_t is_srg;
  uint64_t v;
  uint64_t k;
  uint64_t lambda;
  uint64_t mu;
} LpSrgParameters;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library as a static string; do not free.
 */
const char *lp_version(void);

/**
 * Message of the most recent failure on this thread, empty after a
 * success. The pointer stays valid until the next call on the same
 * thread; do not free.
 */
const char *lp_last_error(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer obtained from a `char**` out-parameter of
 * this library, not yet freed.
 */
void lp_string_free(char *s);

/**
 * Parses graph6 or sparse6 text (header optional) into a new handle.
 *
 * # Safety
 * `text` must be NUL-terminated; `out` must point to writable memory.
 */
enum LpStatus lp_graph_from_g6(const char *text, struct LpGraph **out);

/**
 * Releases a graph handle; null is a no-op.
 *
 * # Safety
 * `g` must be null or a handle from this library, not yet freed.
 */
void lp_graph_free(struct LpGraph *g);

/**
 * Number of vertices, or 0 when `g` is null.
 *
 * # Safety
 * `g` must be null or a live handle from this library.
 */
uint64_t lp_graph_n(const struct LpGraph *g);

/**
 * Encodes the graph as headerless graph6 into a newly allocated string;
 * free it with [`lp_string_free`].
 *
 * # Safety
 * `g` must be a live handle; `out` must point to writable memory.
 */
enum LpStatus lp_graph_to_g6(const struct LpGraph *g, char **out);

/**
 * Builds the point graph of a catalogued geometry: one of the polar
 * spaces (`param` = projective dimension), a line Grassmannian or a
 * half-spin geometry (`param` = series index n).
 *
 * # Safety
 * `family` must be a valid `LpFamily` value; `out` must point to writable
 * memory.
 */
enum LpStatus lp_generate(enum LpFamily family, uint32_t param, uint16_t q, struct LpGraph **out);

/**
 * Runs recognition and returns the full report as JSON in a newly
 * allocated string; free it with [`lp_string_free`]. Unrecognized graphs
 * still return `LP_STATUS_OK`; the verdict is the `family` field of the
 * report.
 *
 * # Safety
 * `g` must be a live handle; `out` must point to writable memory.
 */
enum LpStatus lp_recognize_json(const struct LpGraph *g, char **out);

/**
 * Sets `*result` to 1 when the two graphs are isomorphic, 0 otherwise.
 *
 * # Safety
 * `a` and `b` must be live handles; `result` must point to writable
 * memory.
 */
enum LpStatus lp_are_isomorphic(const struct LpGraph *a, const struct LpGraph *b, int32_t *result);

/**
 * Fills `*out` with the strongly regular graph parameters, or `is_srg ==
 * 0` when the graph is not strongly regular (complete and disconnected
 * graphs included).
 *
 * # Safety
 * `g` must be a live handle; `out` must point to writable memory.
 */
enum LpStatus lp_srg_parameters(const struct LpGraph *g, struct LpSrgParameters *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LIEPROBE_H */
