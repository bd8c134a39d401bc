#ifndef GPCHAIN_H
#define GPCHAIN_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GpchainStatus {
  GPCHAIN_STATUS_OK = 0,
  GPCHAIN_STATUS_INVALID_INPUT = 1,
  /**
   * The weak-coupling expansion was asked for on the critical line.
   */
  GPCHAIN_STATUS_CRITICALITY = 2,
  GPCHAIN_STATUS_NUMERICAL_FAILURE = 3,
  GPCHAIN_STATUS_NULL_POINTER = 4,
  GPCHAIN_STATUS_BUFFER_TOO_SMALL = 5,
  GPCHAIN_STATUS_PANIC = 6,
} GpchainStatus;

/**
 * Validated parameters with their per-mode tables. Opaque to C.
 */
typedef struct GpchainModel GpchainModel;

/**
 * Model parameters by value. `n` is the number of chain sites.
 */
typedef struct GpchainParams {
  double eta;
  double gamma;
  double alpha;
  double lambda;
  double g;
  size_t n;
  double beta;
} GpchainParams;

typedef struct GpchainGpResult {
  /**
   * Phase in `[0, 2 pi)`.
   */
  double phi;
  double raw_phi;
  double quadrature_error;
  size_t evaluations;
  size_t clamped;
} GpchainGpResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Description of the last failure on this thread, or NULL if the last
 * call succeeded. Valid until the next call into this library on the
 * same thread.
 */
const char *gpchain_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gpchain_version(void);

/**
 * Writes the default parameters into `out`.
 *
 * # Safety
 * `out` must be NULL or point to writable memory for one `GpchainParams`.
 */
enum GpchainStatus gpchain_params_default(struct GpchainParams *out);

/**
 * Validates `params` and builds a model handle, stored in `*out`. Release
 * it with [`gpchain_model_free`].
 *
 * # Safety
 * `params` must be NULL or point to a readable `GpchainParams`; `out` must
 * be NULL or point to writable memory for one pointer.
 */
enum GpchainStatus gpchain_model_new(const struct GpchainParams *params, struct GpchainModel **out);

/**
 * Releases a model. NULL is ignored.
 *
 * # Safety
 * `model` must be NULL or a handle from [`gpchain_model_new`] that has not
 * been freed.
 */
void gpchain_model_free(struct GpchainModel *model);

/**
 * # Safety
 * `model` must be NULL or a live handle; `out` must be NULL or writable.
 */
enum GpchainStatus gpchain_model_params(const struct GpchainModel *model,
                                        struct GpchainParams *out);

/**
 * Quasi period `2 pi / eta`.
 *
 * # Safety
 * `model` must be NULL or a live handle; `out` must be NULL or writable.
 */
enum GpchainStatus gpchain_model_period(const struct GpchainModel *model, double *out);

/**
 * `|F(t)|` for `t >= 0`.
 *
 * # Safety
 * `model` must be NULL or a live handle; `out` must be NULL or writable.
 */
enum GpchainStatus gpchain_decoherence_modulus(const struct GpchainModel *model,
                                               double t,
                                               double *out);

/**
 * Samples `|F|` at `steps + 1` uniform instants of one quasi period into
 * `times` and `values`, each holding at least `capacity` doubles.
 *
 * # Safety
 * `model` must be NULL or a live handle. `times` and `values` must be NULL
 * or point to `capacity` writable doubles each.
 */
enum GpchainStatus gpchain_decoherence_series(const struct GpchainModel *model,
                                              size_t steps,
                                              double *times,
                                              double *values,
                                              size_t capacity);

/**
 * Geometric phase over one quasi period, quadrature tolerance `tol`.
 *
 * # Safety
 * `model` must be NULL or a live handle; `out` must be NULL or writable.
 */
enum GpchainStatus gpchain_geometric_phase(const struct GpchainModel *model,
                                           double tol,
                                           struct GpchainGpResult *out);

/**
 * The phase from its general mixed-state definition on a grid of `steps`
 * intervals (`steps >= 16`).
 *
 * # Safety
 * `model` must be NULL or a live handle; `out` must be NULL or writable.
 */
enum GpchainStatus gpchain_geometric_phase_general(const struct GpchainModel *model,
                                                   size_t steps,
                                                   struct GpchainGpResult *out);

/**
 * Weak-coupling estimate of the phase with mode cutoff `cutoff`; 0 keeps
 * every mode.
 *
 * # Safety
 * `model` must be NULL or a live handle; `out` must be NULL or writable.
 */
enum GpchainStatus gpchain_approx_gp(const struct GpchainModel *model, size_t cutoff, double *out);

/**
 * `pi (1 + cos beta)`.
 */
double gpchain_unperturbed_phase(double beta);

/**
 * Quasiparticle energy of mode phase `ka` at effective field `field`.
 */
double gpchain_dispersion(double field, double gamma, double alpha, double ka);

/**
 * Bogoliubov angle in `(-pi, pi]`.
 */
double gpchain_bogoliubov_angle(double field, double gamma, double alpha, double ka);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GPCHAIN_H */
