/* C interface for the movable antenna array optimizer. Generated; do not edit. */

#ifndef MAA_H
#define MAA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code returned by every fallible entry point.
 */
typedef enum MaaStatus {
  /**
   * The call succeeded; all out-parameters were written.
   */
  MAA_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MAA_STATUS_NULL_ARGUMENT = 1,
  /**
   * Input could not be parsed or failed validation; see
   * [`maa_last_error_message`].
   */
  MAA_STATUS_INVALID_INPUT = 2,
  /**
   * A panic was caught at the boundary. State may be incomplete; see
   * [`maa_last_error_message`].
   */
  MAA_STATUS_PANIC = 3,
} MaaStatus;

/**
 * Opaque handle to a search configuration.
 */
typedef struct MaaConfig MaaConfig;

/**
 * Opaque handle to the outcome of one search run.
 */
typedef struct MaaRunResult MaaRunResult;

/**
 * Opaque handle to a validated problem description.
 */
typedef struct MaaScenario MaaScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null if nothing
 * has failed yet. Do not free; the pointer is invalidated by the next
 * failing call on the same thread.
 */
const char *maa_last_error_message(void);

/**
 * Library version as a static string; never freed by the caller.
 */
const char *maa_version(void);

/**
 * Parses and validates a scenario from JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid location.
 */
enum MaaStatus maa_scenario_from_json(const char *json, struct MaaScenario **out);

/**
 * Destroys a scenario handle; accepts null.
 *
 * # Safety
 * `scenario` must have come from this library and not be freed twice.
 */
void maa_scenario_free(struct MaaScenario *scenario);

/**
 * Creates the default search configuration (the reference setup: 40
 * fireflies, 500 generations, growing penalty multipliers).
 *
 * # Safety
 * `out` must be a valid location.
 */
enum MaaStatus maa_config_default(struct MaaConfig **out);

/**
 * Parses a search configuration from JSON. Missing keys take their default
 * values, so `"{}"` is the default configuration and
 * `"{\"rng_seed\": 7}"` overrides only the seed.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid location.
 */
enum MaaStatus maa_config_from_json(const char *json, struct MaaConfig **out);

/**
 * Destroys a config handle; accepts null.
 *
 * # Safety
 * `config` must have come from this library and not be freed twice.
 */
void maa_config_free(struct MaaConfig *config);

/**
 * Runs the full search and returns a result handle. Deterministic for a
 * fixed scenario, config, and seed.
 *
 * # Safety
 * `scenario` and `config` must be live handles and `out` a valid location.
 */
enum MaaStatus maa_run(const struct MaaScenario *scenario,
                       const struct MaaConfig *config,
                       struct MaaRunResult **out);

/**
 * Destroys a result handle; accepts null.
 *
 * # Safety
 * `result` must have come from this library and not be freed twice.
 */
void maa_result_free(struct MaaRunResult *result);

/**
 * Worst-case gain over the intended directions at the best candidate.
 *
 * # Safety
 * `result` must be a live handle and `out` a valid location.
 */
enum MaaStatus maa_result_best_min_gain(const struct MaaRunResult *result, double *out);

/**
 * Whether the best candidate satisfies every constraint within tolerance.
 *
 * # Safety
 * `result` must be a live handle and `out` a valid location.
 */
enum MaaStatus maa_result_feasible(const struct MaaRunResult *result, bool *out);

/**
 * Number of brightness evaluations the run spent.
 *
 * # Safety
 * `result` must be a live handle and `out` a valid location.
 */
enum MaaStatus maa_result_evaluations(const struct MaaRunResult *result, uint64_t *out);

/**
 * Number of antennas in the best candidate, which is the buffer length the
 * position and weight accessors expect.
 *
 * # Safety
 * `result` must be a live handle and `out` a valid location.
 */
enum MaaStatus maa_result_antenna_count(const struct MaaRunResult *result, size_t *out);

/**
 * Copies the best antenna positions (in wavelengths, ascending) into
 * `out[0..len]`. `len` must equal the antenna count.
 *
 * # Safety
 * `result` must be a live handle and `out` must point to `len` doubles.
 */
enum MaaStatus maa_result_positions(const struct MaaRunResult *result, double *out, size_t len);

/**
 * Copies the best beamforming weights into `out_re[0..len]` and
 * `out_im[0..len]`. `len` must equal the antenna count.
 *
 * # Safety
 * `result` must be a live handle; each buffer must point to `len` doubles.
 */
enum MaaStatus maa_result_weights(const struct MaaRunResult *result,
                                  double *out_re,
                                  double *out_im,
                                  size_t len);

/**
 * Serializes the full result (best candidate, feasibility report, per
 * generation trace, evaluation count) to a JSON string. Free the string
 * with [`maa_string_free`]. The layout matches the `result` field of the
 * command line tool's result file.
 *
 * # Safety
 * `result` must be a live handle and `out` a valid location.
 */
enum MaaStatus maa_result_to_json(const struct MaaRunResult *result, char **out);

/**
 * Frees a string returned by this library; accepts null.
 *
 * # Safety
 * `s` must have come from this library and not be freed twice.
 */
void maa_string_free(char *s);

/**
 * Beamforming gain `|w^H s(d, theta)|^2` for an arbitrary weighting and
 * placement, without a scenario or a search. Weights are split into real
 * and imaginary parts; positions are in wavelengths; `theta_deg` is the
 * direction in `[0, 180]`.
 *
 * # Safety
 * The three array arguments must each point to `len` doubles.
 */
enum MaaStatus maa_beamforming_gain(const double *weights_re,
                                    const double *weights_im,
                                    const double *positions_wl,
                                    size_t len,
                                    double theta_deg,
                                    double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAA_H */
