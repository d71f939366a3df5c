#ifndef SINGSHOCK_H
#define SINGSHOCK_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SsEventKind {
  SS_EVENT_KIND_INTERACTION = 0,
  SS_EVENT_KIND_FAN_ENTRY = 1,
  SS_EVENT_KIND_FAN_EXIT = 2,
  SS_EVENT_KIND_BAND_EXIT = 3,
  SS_EVENT_KIND_VANISH = 4,
} SsEventKind;

typedef enum SsRegion {
  SS_REGION_Q7 = 0,
  SS_REGION_SDSL_ONLY = 1,
  SS_REGION_ABOVE_D = 2,
  SS_REGION_BELOW_E = 3,
  SS_REGION_ON_J1 = 4,
  SS_REGION_HAT_D = 5,
  SS_REGION_HAT_HAT_D = 6,
  SS_REGION_HAT_E = 7,
  SS_REGION_HAT_HAT_E = 8,
  SS_REGION_D0 = 9,
  SS_REGION_CLASSICAL = 10,
} SsRegion;

/**
 * Result codes.
 */
typedef enum SsStatus {
  SS_STATUS_OK = 0,
  SS_STATUS_NULL_POINTER = 1,
  SS_STATUS_INVALID_UTF8 = 2,
  SS_STATUS_INVALID_INPUT = 3,
  /**
   * No admissible Riemann solution for the data.
   */
  SS_STATUS_NO_SOLUTION = 4,
  /**
   * A numerical step failed to converge or left its domain.
   */
  SS_STATUS_NUMERICAL = 5,
  /**
   * The interaction engine could not resolve an event.
   */
  SS_STATUS_ENGINE = 6,
  SS_STATUS_OUT_OF_RANGE = 7,
  SS_STATUS_PANIC = 8,
} SsStatus;

typedef enum SsTrajectoryKind {
  SS_TRAJECTORY_KIND_SHOCK = 0,
  SS_TRAJECTORY_KIND_SINGULAR = 1,
  SS_TRAJECTORY_KIND_FAN_EDGE = 2,
} SsTrajectoryKind;

/**
 * Opaque solved scenario.
 */
typedef struct SsTimeline SsTimeline;

typedef struct SsTrajectoryInfo {
  enum SsTrajectoryKind kind;
  /**
   * 1 or 2 for classical waves, 0 otherwise.
   */
  uint8_t family;
  bool curved;
  double t_start;
  double t_end;
  double x_start;
  double x_end;
  double strength_start;
  double strength_end;
  /**
   * Event ids, or -1.
   */
  int64_t start_event;
  int64_t end_event;
} SsTrajectoryInfo;

typedef struct SsEventInfo {
  enum SsEventKind kind;
  double t;
  double x;
  double zeta;
  size_t incoming;
  size_t outgoing;
} SsEventInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ss_version(void);

/**
 * Message of the last failure on this thread; empty after a success.
 * Valid until the next call into the library on this thread.
 */
const char *ss_last_error(void);

/**
 * Classifies `(u, v)` relative to the base state `(base_u, base_v)`.
 *
 * # Safety
 * `out_region` must be null or point to writable memory.
 */
enum SsStatus ss_classify(double base_u,
                          double base_v,
                          double u,
                          double v,
                          enum SsRegion *out_region);

/**
 * Solves the Riemann problem with an incoming delta of strength `zeta` and
 * writes the JSON description of the wave fan to `out_json`.
 *
 * # Safety
 * `out_json` must be null or point to writable memory.
 */
enum SsStatus ss_riemann_json(double left_u,
                              double left_v,
                              double right_u,
                              double right_v,
                              double zeta,
                              char **out_json);

/**
 * Runs the interaction engine on a scenario given as JSON
 * (`states`, `breakpoints`, optional `deltas`, `t_max`).
 *
 * # Safety
 * `scenario_json` must be null or a NUL-terminated string; `out_timeline`
 * must be null or point to writable memory.
 */
enum SsStatus ss_simulate(const char *scenario_json, struct SsTimeline **out_timeline);

/**
 * # Safety
 * `timeline` must be null or a handle from [`ss_simulate`] not yet freed.
 */
void ss_timeline_free(struct SsTimeline *timeline);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void ss_string_free(char *s);

/**
 * # Safety
 * Pointers must be null or valid.
 */
enum SsStatus ss_timeline_counts(const struct SsTimeline *timeline,
                                 size_t *out_trajectories,
                                 size_t *out_events);

/**
 * # Safety
 * Pointers must be null or valid.
 */
enum SsStatus ss_timeline_trajectory(const struct SsTimeline *timeline,
                                     size_t index,
                                     struct SsTrajectoryInfo *out_info);

/**
 * Position and delta strength of a trajectory at time `t` within its life.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum SsStatus ss_timeline_sample(const struct SsTimeline *timeline,
                                 size_t index,
                                 double t,
                                 double *out_x,
                                 double *out_strength);

/**
 * # Safety
 * Pointers must be null or valid.
 */
enum SsStatus ss_timeline_event(const struct SsTimeline *timeline,
                                size_t index,
                                struct SsEventInfo *out_info);

/**
 * Solution descriptor JSON, readable by the command-line tool.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum SsStatus ss_timeline_to_json(const struct SsTimeline *timeline, char **out_json);

/**
 * # Safety
 * Pointers must be null or valid.
 */
enum SsStatus ss_timeline_to_csv(const struct SsTimeline *timeline, char **out_csv);

/**
 * # Safety
 * Pointers must be null or valid.
 */
enum SsStatus ss_timeline_to_svg(const struct SsTimeline *timeline, char **out_svg);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SINGSHOCK_H */
