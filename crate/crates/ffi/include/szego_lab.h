#ifndef SZEGO_LAB_H
#define SZEGO_LAB_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

/*
 Result of every fallible call.
 */
typedef enum SzStatus {
  SZ_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  SZ_STATUS_NULL_POINTER = 1,
  /*
   Invalid input or unmet precondition.
   */
  SZ_STATUS_INVALID = 2,
  /*
   Overflow, integration blow-up or SVD non-convergence.
   */
  SZ_STATUS_NUMERICAL = 3,
  SZ_STATUS_IO = 4,
  /*
   The caller's buffer has the wrong length.
   */
  SZ_STATUS_BUFFER_SIZE = 5,
  /*
   Internal panic; the library state is unaffected.
   */
  SZ_STATUS_PANIC = 6,
} SzStatus;

typedef enum SzNonlinearMode {
  SZ_NONLINEAR_MODE_FFT = 0,
  SZ_NONLINEAR_MODE_DIRECT = 1,
} SzNonlinearMode;

/*
 Opaque truncated Hardy series.
 */
typedef struct SzSeries SzSeries;

/*
 Opaque sampled trajectory.
 */
typedef struct SzTrajectory SzTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. Valid until the
 next failing call on the same thread.
 */
const char *sz_last_error_message(void);

/*
 Library version as a static nul-terminated string.
 */
const char *sz_version(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void sz_string_free(char *s);

/*
 Builds a series of degree `len − 1` from real and imaginary parts; `im`
 may be null for real coefficients.

 # Safety
 `re` (and `im` if non-null) must point to `len` doubles; `out` must be writable.
 */
enum SzStatus sz_series_new(const double *re,
                            const double *im,
                            uintptr_t len,
                            struct SzSeries **out);

/*
 Parses `{"coeffs": [[re, im], ...]}`.

 # Safety
 `json` must be a nul-terminated string; `out` must be writable.
 */
enum SzStatus sz_series_from_json(const char *json, struct SzSeries **out);

/*
 Serialises a series; release the string with [`sz_string_free`].

 # Safety
 `series` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_series_to_json(const struct SzSeries *series, char **out);

/*
 # Safety
 `series` must be null or a live handle, not used afterwards.
 */
void sz_series_free(struct SzSeries *series);

/*
 # Safety
 `series` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_series_degree(const struct SzSeries *series, uintptr_t *out);

/*
 Copies the coefficients into `re` and `im`, each of exactly `degree + 1` doubles.

 # Safety
 `series` must be a live handle; `re` and `im` must hold `len` doubles.
 */
enum SzStatus sz_series_coeffs(const struct SzSeries *series,
                               double *re,
                               double *im,
                               uintptr_t len);

/*
 `(Σ|û(k)|²)^{1/2}`.

 # Safety
 `series` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_series_l2_norm(const struct SzSeries *series, double *out);

/*
 `Σ|û(k)|`.

 # Safety
 `series` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_series_wiener_norm(const struct SzSeries *series, double *out);

/*
 `(Σ(k^{2s}+1)|û(k)|²)^{1/2}` for `s ≥ 0`.

 # Safety
 `series` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_series_hs_norm(const struct SzSeries *series, double s, double *out);

/*
 `Σe^{σk^γ}|û(k)|` for `σ ≥ 0`, `0 < γ ≤ 1`.

 # Safety
 `series` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_series_gevrey_norm(const struct SzSeries *series,
                                    double sigma,
                                    double gamma,
                                    double *out);

/*
 Trace norm of the Hankel operator with the given symbol.

 # Safety
 `series` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_hankel_trace_norm(const struct SzSeries *series, double *out);

/*
 Integrates from `initial` with `ceil(t_end/dt)` RK4 steps, keeping every
 `sample_every`-th state plus the first and last. `mode` is one of the
 `SzNonlinearMode` values.

 # Safety
 `initial` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_simulate(const struct SzSeries *initial,
                          uintptr_t degree,
                          double dt,
                          double t_end,
                          uintptr_t sample_every,
                          int32_t mode,
                          struct SzTrajectory **out);

/*
 # Safety
 `traj` must be null or a live handle, not used afterwards.
 */
void sz_trajectory_free(struct SzTrajectory *traj);

/*
 Number of samples.

 # Safety
 `traj` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_trajectory_len(const struct SzTrajectory *traj, uintptr_t *out);

/*
 # Safety
 `traj` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_trajectory_time(const struct SzTrajectory *traj, uintptr_t index, double *out);

/*
 Copies sample `index` into a new series handle.

 # Safety
 `traj` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_trajectory_state(const struct SzTrajectory *traj,
                                  uintptr_t index,
                                  struct SzSeries **out);

/*
 Maximum relative drifts of the `L²` norm, momentum and Hamiltonian.

 # Safety
 `traj` must be a live handle; the three outputs must be writable.
 */
enum SzStatus sz_trajectory_conservation(const struct SzTrajectory *traj,
                                         double *l2_drift,
                                         double *momentum_drift,
                                         double *hamiltonian_drift);

/*
 Checks the Gevrey bound `‖u(t)‖ ≤ C₀` at every sample with radius `σe^{−λ|t|}`.

 # Safety
 `traj` must be a live handle; `passed` and `max_ratio` must be writable.
 */
enum SzStatus sz_persistence_check(const struct SzTrajectory *traj,
                                   double sigma,
                                   bool *passed,
                                   double *max_ratio);

/*
 Runs a JSON experiment spec and returns the result document; release it
 with [`sz_string_free`]. Nothing is written to disk.

 # Safety
 `spec_json` must be a nul-terminated string; `out` must be writable.
 */
enum SzStatus sz_run_experiment_json(const char *spec_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SZEGO_LAB_H */
