#ifndef COUETTE_MHD_H
#define COUETTE_MHD_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CmStatus {
  CM_STATUS_OK = 0,
  CM_STATUS_NULL_POINTER = 1,
  CM_STATUS_INVALID_ARGUMENT = 2,
  CM_STATUS_NUMERICAL_ABORT = 3,
  CM_STATUS_CONFIG = 4,
  CM_STATUS_IO = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  CM_STATUS_INTERNAL = 6,
} CmStatus;

/**
 * Opaque solver plus state.
 */
typedef struct CmSimulation CmSimulation;

/**
 * Opaque validated weight parameters.
 */
typedef struct CmWeights CmWeights;

/**
 * Grid and evolution settings for a simulation.
 */
typedef struct CmSimParams {
  size_t nx;
  size_t ny;
  double ly;
  double alpha;
  double nu;
  double kappa;
  bool nonlinear;
  /**
   * Largest RK4 step.
   */
  double dt;
} CmSimParams;

/**
 * Norms of the current state.
 */
typedef struct CmNorms {
  double t;
  double l2;
  double hm1;
  double vorticity_current;
  double max_divergence;
} CmNorms;

/**
 * Parameters of the time-dependent Fourier multiplier.
 */
typedef struct CmWeightParams {
  double rho;
  double lambda0;
  double s;
  /**
   * Sobolev index.
   */
  double n;
  double alpha;
  double c0;
  double eps;
} CmWeightParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *cm_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cm_version(void);

/**
 * Fill `out` with the default settings (64×64, α = 1, ideal, nonlinear).
 *
 * # Safety
 * `out` must be null or point to writable memory for one `CmSimParams`.
 */
enum CmStatus cm_sim_params_default(struct CmSimParams *out);

/**
 * Create a simulation with zero initial data at t = 0.
 *
 * # Safety
 * `params` must be null or valid; `out` must be null or writable.
 */
enum CmStatus cm_simulation_new(const struct CmSimParams *params, struct CmSimulation **out);

/**
 * # Safety
 * `sim` must be null or a handle from `cm_simulation_new` not yet freed.
 */
void cm_simulation_free(struct CmSimulation *sim);

/**
 * Replace the state by random Gevrey-class data with `‖(v,b)‖_{G^{lambda1}} = eps`
 * (`s = 0.6`, `N = 5`) and reset the time to 0.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
enum CmStatus cm_simulation_set_random(struct CmSimulation *sim,
                                       uint64_t seed,
                                       double eps,
                                       double lambda1);

/**
 * Replace the state by a single real mode `±(k, j)` of the velocity
 * (`magnetic = false`) or magnetic field, and reset the time to 0.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
enum CmStatus cm_simulation_set_single_mode(struct CmSimulation *sim,
                                            int64_t k,
                                            int64_t j,
                                            double amplitude,
                                            bool magnetic);

/**
 * Advance the state to `t_end`. On a numerical abort the state is left unchanged.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
enum CmStatus cm_simulation_advance(struct CmSimulation *sim, double t_end);

/**
 * # Safety
 * `sim` must be null or a live handle; `out` must be null or writable.
 */
enum CmStatus cm_simulation_norms(const struct CmSimulation *sim, struct CmNorms *out);

/**
 * # Safety
 * `out` must be null or writable.
 */
enum CmStatus cm_weight_params_default(struct CmWeightParams *out);

/**
 * # Safety
 * `params` must be null or valid; `out` must be null or writable.
 */
enum CmStatus cm_weights_new(const struct CmWeightParams *params, struct CmWeights **out);

/**
 * # Safety
 * `w` must be null or a handle from `cm_weights_new` not yet freed.
 */
void cm_weights_free(struct CmWeights *w);

/**
 * `ln A(t, k, η)`, the logarithm of the multiplier.
 *
 * # Safety
 * `w` must be null or a live handle; `out` must be null or writable.
 */
enum CmStatus cm_weights_log_a(const struct CmWeights *w,
                               double t,
                               double k,
                               double eta,
                               double *out);

/**
 * Radius `λ(t)` of the Gevrey part of the multiplier.
 *
 * # Safety
 * `w` must be null or a live handle; `out` must be null or writable.
 */
enum CmStatus cm_weights_lambda(const struct CmWeights *w, double t, double *out);

/**
 * Amplification `sinh(c0 asinh(η/k²))` across one resonant interval.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum CmStatus cm_chain_step_amplification(double c0, double eta, uint64_t k, double *out);

/**
 * Log of the total amplification of the chain started at `k = ⌊√(c0 η)⌋`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum CmStatus cm_chain_log_growth(double c0, double eta, double *out);

/**
 * Run a JSON experiment config, writing its outputs under `out_dir`
 * (null to use the config's `output_dir`, or `out`).
 *
 * # Safety
 * `config_json` must be a NUL-terminated string; `out_dir` null or one.
 */
enum CmStatus cm_run_config(const char *config_json, const char *out_dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COUETTE_MHD_H */
