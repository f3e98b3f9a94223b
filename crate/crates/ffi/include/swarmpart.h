#ifndef SWARMPART_H
#define SWARMPART_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call. Values 2–8 match the CLI exit codes.
 */
typedef enum SwarmStatus {
  SWARM_STATUS_OK = 0,
  SWARM_STATUS_NULL_POINTER = 1,
  SWARM_STATUS_INVALID_CONFIG = 2,
  SWARM_STATUS_INSUFFICIENT_AGENTS = 3,
  SWARM_STATUS_DIMENSION_MISMATCH = 4,
  SWARM_STATUS_NUMERIC = 5,
  SWARM_STATUS_INFEASIBLE = 6,
  SWARM_STATUS_WINDOW_TOO_LARGE = 7,
  SWARM_STATUS_IO = 8,
  SWARM_STATUS_PANIC = 9,
} SwarmStatus;

typedef enum SwarmAlgorithm {
  SWARM_ALGORITHM_RAO = 0,
  SWARM_ALGORITHM_ONNRAO = 1,
} SwarmAlgorithm;

/**
 * Opaque search space.
 */
typedef struct SwarmEnvironment SwarmEnvironment;

/**
 * Opaque partition outcome.
 */
typedef struct SwarmPartitionResult SwarmPartitionResult;

/**
 * Opaque agent-major point set.
 */
typedef struct SwarmPointSet SwarmPointSet;

/**
 * Plain-data partition settings; fill with [`swarm_partition_config_default`].
 */
typedef struct SwarmPartitionConfig {
  enum SwarmAlgorithm algorithm;
  size_t agents;
  uint64_t seed;
  size_t max_iters;
  double tolerance_converge;
  double tolerance_normalization;
  double expand_by;
} SwarmPartitionConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or NULL.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *swarm_last_error_message(void);

/**
 * Unit hypercube `[0, 1]^dims` without obstacles or regions.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SwarmStatus swarm_environment_new_unit(size_t dims, struct SwarmEnvironment **out);

/**
 * Box domain with the given corners (`dims` values each).
 *
 * # Safety
 * `lower` and `upper` must point to `dims` readable doubles; `out` must be writable.
 */
enum SwarmStatus swarm_environment_new_box(const double *lower,
                                           const double *upper,
                                           size_t dims,
                                           struct SwarmEnvironment **out);

/**
 * Parse an environment from TOML (`[domain]`, `[[obstacles]]`, `[[regions]]` tables).
 *
 * # Safety
 * `toml` must be a NUL-terminated UTF-8 string; `out` must be writable.
 */
enum SwarmStatus swarm_environment_from_toml(const char *toml, struct SwarmEnvironment **out);

/**
 * Add an axis-aligned box obstacle.
 *
 * # Safety
 * `env` must be a live handle; `lower`/`upper` must point to `dims` doubles.
 */
enum SwarmStatus swarm_environment_add_box_obstacle(struct SwarmEnvironment *env,
                                                    const double *lower,
                                                    const double *upper,
                                                    size_t dims);

/**
 * Add a spherical region whose pair displacements are scaled by `weight`.
 *
 * # Safety
 * `env` must be a live handle; `center` must point to `dims` doubles.
 */
enum SwarmStatus swarm_environment_add_sphere_region(struct SwarmEnvironment *env,
                                                     const double *center,
                                                     size_t dims,
                                                     double radius,
                                                     double weight);

/**
 * # Safety
 * `env` must be NULL or a handle not yet freed.
 */
void swarm_environment_free(struct SwarmEnvironment *env);

/**
 * Copy `count` agents of `dims` coordinates (agent-major) into a new point set.
 *
 * # Safety
 * `coords` must point to `count * dims` doubles; `out` must be writable.
 */
enum SwarmStatus swarm_pointset_new(const double *coords,
                                    size_t count,
                                    size_t dims,
                                    struct SwarmPointSet **out);

/**
 * Number of agents; 0 for NULL.
 *
 * # Safety
 * `points` must be NULL or a live handle.
 */
size_t swarm_pointset_len(const struct SwarmPointSet *points);

/**
 * Coordinates per agent; 0 for NULL.
 *
 * # Safety
 * `points` must be NULL or a live handle.
 */
size_t swarm_pointset_dims(const struct SwarmPointSet *points);

/**
 * Copy all coordinates (agent-major) into `buffer`, which holds `capacity` doubles.
 *
 * # Safety
 * `points` must be a live handle; `buffer` must point to `capacity` writable doubles.
 */
enum SwarmStatus swarm_pointset_copy(const struct SwarmPointSet *points,
                                     double *buffer,
                                     size_t capacity);

/**
 * # Safety
 * `points` must be NULL or a handle not yet freed.
 */
void swarm_pointset_free(struct SwarmPointSet *points);

/**
 * Library defaults for a partition run.
 *
 * # Safety
 * `out` must point to writable storage for one config.
 */
enum SwarmStatus swarm_partition_config_default(struct SwarmPartitionConfig *out);

/**
 * Run RAO or ONNRAO. `initial` may be NULL for a seeded random start.
 *
 * # Safety
 * `config` and `env` must be valid; `initial` NULL or a live handle; `out` writable.
 */
enum SwarmStatus swarm_partition(const struct SwarmPartitionConfig *config,
                                 const struct SwarmEnvironment *env,
                                 const struct SwarmPointSet *initial,
                                 struct SwarmPartitionResult **out);

/**
 * Copy of the final agent positions as a new point set.
 *
 * # Safety
 * `result` must be a live handle; `out` writable.
 */
enum SwarmStatus swarm_partition_result_points(const struct SwarmPartitionResult *result,
                                               struct SwarmPointSet **out);

/**
 * Expansion sweeps performed (excluding normalization); 0 for NULL.
 *
 * # Safety
 * `result` must be NULL or a live handle.
 */
size_t swarm_partition_result_iterations(const struct SwarmPartitionResult *result);

/**
 * Whether the run stopped by convergence rather than the sweep budget.
 *
 * # Safety
 * `result` must be NULL or a live handle.
 */
bool swarm_partition_result_converged(const struct SwarmPartitionResult *result);

/**
 * # Safety
 * `result` must be NULL or a handle not yet freed.
 */
void swarm_partition_result_free(struct SwarmPartitionResult *result);

/**
 * Monte Carlo Lloyd CVT with `generators` points. `samples_per_iter` 0 uses the default.
 *
 * # Safety
 * `env` must be a live handle; `out` writable.
 */
enum SwarmStatus swarm_cvt(const struct SwarmEnvironment *env,
                           size_t generators,
                           size_t lloyd_iters,
                           size_t samples_per_iter,
                           uint64_t seed,
                           struct SwarmPointSet **out);

/**
 * Coefficients of variation of nearest and next-nearest neighbor distances.
 *
 * # Safety
 * `points` must be a live handle; `nn_out` and `next_out` writable.
 */
enum SwarmStatus swarm_nn_cv(const struct SwarmPointSet *points, double *nn_out, double *next_out);

/**
 * Explained-variance ratios, descending, written to `buffer` (`dims` values).
 *
 * # Safety
 * `points` must be a live handle; `buffer` must hold `capacity` doubles.
 */
enum SwarmStatus swarm_pca_scree(const struct SwarmPointSet *points,
                                 double *buffer,
                                 size_t capacity);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SWARMPART_H */
