#ifndef PLANAR_LIMITS_H
#define PLANAR_LIMITS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call.
 */
typedef enum PllStatus {
  PLL_STATUS_OK = 0,
  PLL_STATUS_NULL_POINTER = 1,
  PLL_STATUS_INVALID_ARGUMENT = 2,
  PLL_STATUS_INVALID_GRAPH = 3,
  PLL_STATUS_DISCONNECTED = 4,
  PLL_STATUS_NO_CONVERGENCE = 5,
  PLL_STATUS_SIZE_CAP = 6,
  PLL_STATUS_PARSE = 7,
  PLL_STATUS_IO = 8,
  PLL_STATUS_PANIC = 9,
} PllStatus;

/**
 * A network (a plane graph with edge resistances).
 */
typedef struct PllNetwork PllNetwork;

/**
 * A circle packing.
 */
typedef struct PllPacking PllPacking;

/**
 * Monte Carlo avoidance estimate with a Wilson 95% interval.
 */
typedef struct PllEstimate {
  double phi;
  double ci_low;
  double ci_high;
  uint64_t successes;
  uint64_t trials;
} PllEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pll_version(void);

/**
 * Message of the last failure on this thread, or null after a success.
 */
const char *pll_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 */
void pll_string_free(char *s);

/**
 * Parses graph or network JSON (`{"n", "rot", "R"?, "root"?}`).
 */
enum PllStatus pll_network_from_json(const char *json, struct PllNetwork **out);

/**
 * `n x n` grid with unit resistances.
 */
enum PllStatus pll_network_grid(size_t n, struct PllNetwork **out);

/**
 * Sphere triangulation on `n` vertices after `steps` edge flips.
 */
enum PllStatus pll_network_flip_triangulation(size_t n,
                                              uint64_t steps,
                                              uint64_t seed,
                                              struct PllNetwork **out);

/**
 * Sharpness graph of height `h`; `out_root` receives the top of the tree.
 */
enum PllStatus pll_network_sharpness(size_t h,
                                     double alpha,
                                     struct PllNetwork **out,
                                     size_t *out_root);

/**
 * Releases a network. Null is ignored.
 */
void pll_network_free(struct PllNetwork *net);

enum PllStatus pll_network_vertex_count(const struct PllNetwork *net, size_t *out);

enum PllStatus pll_network_edge_count(const struct PllNetwork *net, size_t *out);

/**
 * Network JSON; free the result with [`pll_string_free`].
 */
enum PllStatus pll_network_to_json(const struct PllNetwork *net, char **out);

/**
 * `Reff(A <-> Z)`; `+inf` when the sets are disconnected or one is empty.
 */
enum PllStatus pll_effective_resistance(const struct PllNetwork *net,
                                        const size_t *a,
                                        size_t a_len,
                                        const size_t *z,
                                        size_t z_len,
                                        double *out);

/**
 * `P_a(tau_z < tau_a^+)`.
 */
enum PllStatus pll_escape_probability(const struct PllNetwork *net,
                                      size_t a,
                                      size_t z,
                                      double *out);

/**
 * Probability that a walk from a uniform start avoids it at times `1..=horizon`.
 */
enum PllStatus pll_avoidance_probability(const struct PllNetwork *net,
                                         size_t horizon,
                                         uint64_t trials,
                                         uint64_t seed,
                                         struct PllEstimate *out);

/**
 * Star-tree transform of the network's graph as JSON with markings and codes.
 */
enum PllStatus pll_startree_json(const struct PllNetwork *net, char **out);

/**
 * Packs a disk triangulation whose outer face is `boundary` with the given radii.
 */
enum PllStatus pll_pack_triangulation(const struct PllNetwork *net,
                                      const size_t *boundary,
                                      const double *radii,
                                      size_t len,
                                      struct PllPacking **out);

/**
 * Releases a packing. Null is ignored.
 */
void pll_packing_free(struct PllPacking *p);

enum PllStatus pll_packing_vertex_count(const struct PllPacking *p, size_t *out);

/**
 * Center and radius of circle `v`.
 */
enum PllStatus pll_packing_circle(const struct PllPacking *p,
                                  size_t v,
                                  double *out_x,
                                  double *out_y,
                                  double *out_r);

/**
 * SVG drawing; `root < 0` highlights nothing.
 */
enum PllStatus pll_packing_svg(const struct PllPacking *p, int64_t root, bool edges, char **out);

/**
 * Number of `(delta, s)`-supported points among `count` points given as `x0, y0, x1, y1, ...`.
 */
enum PllStatus pll_supported_count(const double *xy,
                                   size_t count,
                                   double delta,
                                   size_t s,
                                   size_t *out);

/**
 * Runs an experiment recipe given as JSON and writes its outputs; `out_pass` receives
 * whether every audit held.
 */
enum PllStatus pll_run_experiment(const char *recipe_json, bool *out_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLANAR_LIMITS_H */
