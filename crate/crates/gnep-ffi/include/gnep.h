#ifndef GNEP_H
#define GNEP_H

#include <stddef.h>
#include <stdint.h>

typedef enum GnepSolveStatus {
  GNEP_SOLVE_STATUS_CONVERGED = 0,
  GNEP_SOLVE_STATUS_STALLED_STATIONARY = 1,
  GNEP_SOLVE_STATUS_MAX_OUTER = 2,
  GNEP_SOLVE_STATUS_ORACLE_FAILURE = 3,
  GNEP_SOLVE_STATUS_INNER_NONCONVERGENCE = 4,
} GnepSolveStatus;

typedef enum GnepStatus {
  GNEP_STATUS_OK = 0,
  GNEP_STATUS_NULL_POINTER = 1,
  GNEP_STATUS_INVALID_UTF8 = 2,
  GNEP_STATUS_UNKNOWN_PROBLEM = 3,
  GNEP_STATUS_IO = 4,
  GNEP_STATUS_PARSE = 5,
  GNEP_STATUS_DIMENSION = 6,
  GNEP_STATUS_CONFIG = 7,
  GNEP_STATUS_ORACLE = 8,
  GNEP_STATUS_INNER_NONCONVERGENCE = 9,
  GNEP_STATUS_BUFFER_SIZE = 10,
  GNEP_STATUS_PANIC = 11,
} GnepStatus;

/**
 * Opaque game instance.
 */
typedef struct GnepGame GnepGame;

/**
 * Opaque solver outcome.
 */
typedef struct GnepResult GnepResult;

/**
 * Solver settings. Non-positive `gamma` selects the automatic policy and
 * non-positive `sigma0` the default step.
 */
typedef struct GnepOptions {
  double alpha;
  double beta;
  double gamma;
  double gamma_safety;
  double sigma0;
  /**
   * Zero for a constant step.
   */
  double sigma_decay;
  /**
   * Nonzero caps each player's step by its own proximal weight.
   */
  int32_t per_player_sigma;
  double tol;
  double inner_eps;
  uint64_t max_outer;
  uint64_t max_inner;
  uint64_t seed;
  /**
   * 1 runs serially, 0 uses all cores.
   */
  uint32_t threads;
} GnepOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Writes the default settings into `out`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum GnepStatus gnep_options_default(struct GnepOptions *out);

/**
 * Builds a named built-in instance; `seed` drives the generated families.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` valid for writes.
 */
enum GnepStatus gnep_game_builtin(const char *name, uint64_t seed, struct GnepGame **out);

/**
 * Loads a quadratic instance file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` valid for writes.
 */
enum GnepStatus gnep_game_load(const char *path, struct GnepGame **out);

/**
 * # Safety
 * `game` must be null or a handle from this library not yet freed.
 */
void gnep_game_free(struct GnepGame *game);

/**
 * Player count, total dimension and total functional constraints.
 *
 * # Safety
 * `game` must be a live handle; output pointers may be null.
 */
enum GnepStatus gnep_game_dims(const struct GnepGame *game,
                               uintptr_t *players,
                               uintptr_t *n,
                               uintptr_t *m);

/**
 * Runs the solver from `x0` (length `n`). With null `options` the defaults are used.
 *
 * A result handle is produced whenever iterations ran, including after an
 * inner-loop failure; the status then reports the failure.
 *
 * # Safety
 * `game` must be live, `x0` valid for `n` reads, `options` null or valid,
 * and `out` valid for writes.
 */
enum GnepStatus gnep_solve(const struct GnepGame *game,
                           const double *x0,
                           uintptr_t n,
                           const struct GnepOptions *options,
                           struct GnepResult **out);

/**
 * # Safety
 * `result` must be null or a handle from this library not yet freed.
 */
void gnep_result_free(struct GnepResult *result);

/**
 * # Safety
 * `result` must be live and `out` valid for writes.
 */
enum GnepStatus gnep_result_status(const struct GnepResult *result, enum GnepSolveStatus *out);

/**
 * Copies the final strategy profile into `buf`, which must hold exactly `n` values.
 *
 * # Safety
 * `result` must be live and `buf` valid for `len` writes.
 */
enum GnepStatus gnep_result_x(const struct GnepResult *result, double *buf, uintptr_t len);

/**
 * Number of multipliers of `player`.
 *
 * # Safety
 * `result` must be live and `out` valid for writes.
 */
enum GnepStatus gnep_result_lambda_len(const struct GnepResult *result,
                                       uintptr_t player,
                                       uintptr_t *out);

/**
 * Copies the final multipliers of `player`.
 *
 * # Safety
 * `result` must be live and `buf` valid for `len` writes.
 */
enum GnepStatus gnep_result_lambda(const struct GnepResult *result,
                                   uintptr_t player,
                                   double *buf,
                                   uintptr_t len);

/**
 * Outer and cumulative inner iteration counts plus the final stopping residual.
 *
 * # Safety
 * `result` must be live; output pointers may be null.
 */
enum GnepStatus gnep_result_stats(const struct GnepResult *result,
                                  uint64_t *outer,
                                  uint64_t *inner,
                                  double *residual);

/**
 * Copies the last error message of this thread, NUL-terminated and
 * truncated to `len`. Returns the full message length excluding the NUL.
 *
 * # Safety
 * `buf` must be null or valid for `len` writes.
 */
uintptr_t gnep_last_error_message(char *buf, uintptr_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GNEP_H */
