/*
 * Copyright 2026 QMGeo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the QMGeo library: a randomized quantizer whose output
 * level follows a mixture of truncated geometric distributions, the
 * matching differential-privacy accountant with exhaustive numerical
 * oracles, a deterministic federated-learning simulator, and the
 * optimality-gap calculator for instrumented runs.
 *
 * Conventions:
 *  - Every fallible call returns qmgeo_status; on failure the thread-local
 *    message from qmgeo_last_error() describes the problem.
 *  - Out-parameters are written only on QMGEO_OK.
 *  - Handles are destroyed with their qmgeo_*_destroy function; strings
 *    returned through char** are released with qmgeo_string_free.
 *  - Unbounded privacy loss is reported as +infinity, never as an error.
 */

#ifndef QMGEO_QMGEO_H_
#define QMGEO_QMGEO_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qmgeo_status {
  QMGEO_OK = 0,
  QMGEO_ERROR_INVALID_ARGUMENT = 2,
  QMGEO_ERROR_DATA = 3,
  QMGEO_ERROR_NUMERIC = 4,
  QMGEO_ERROR_INTERNAL = 5
} qmgeo_status;

/* QMGEO_MODE_LITERAL keeps the raw mixture weight; inputs exactly on the
 * outermost levels then leave some output levels with zero probability.
 * QMGEO_MODE_DP_SAFE clamps the weight into [gamma, 1-gamma] so every level
 * keeps positive mass for every input. */
typedef enum qmgeo_mode {
  QMGEO_MODE_LITERAL = 0,
  QMGEO_MODE_DP_SAFE = 1
} qmgeo_mode;

typedef enum qmgeo_mechanism {
  QMGEO_MECHANISM_MGEO = 0,  /* mixed truncated geometric quantizer */
  QMGEO_MECHANISM_KLEVEL = 1 /* stochastic rounding baseline */
} qmgeo_mechanism;

typedef struct qmgeo_quantizer qmgeo_quantizer;
typedef struct qmgeo_dist qmgeo_dist;
typedef struct qmgeo_table qmgeo_table;

const char* qmgeo_version(void);

/* Message for the most recent failure on this thread. */
const char* qmgeo_last_error(void);

void qmgeo_string_free(char* s);

/* ---- quantizer ------------------------------------------------------- */

qmgeo_status qmgeo_quantizer_create(int32_t levels, double p, double w_max,
                                    qmgeo_mode mode, double gamma,
                                    qmgeo_quantizer** out);
void qmgeo_quantizer_destroy(qmgeo_quantizer* quantizer);

qmgeo_status qmgeo_bin_value(const qmgeo_quantizer* quantizer, int32_t level,
                             double* out);

/* Distribution over level indices {0..R-1} for input w. */
qmgeo_status qmgeo_output_distribution(const qmgeo_quantizer* quantizer,
                                       double w, qmgeo_dist** out);
qmgeo_status qmgeo_klevel_distribution(const qmgeo_quantizer* quantizer,
                                       double w, qmgeo_dist** out);

qmgeo_status qmgeo_clip(double* values, size_t count, double w_max);

/* Element i draws from a substream derived from (seed, i); results are
 * independent of evaluation order. levels_out/values_out may be NULL when
 * that output is not needed. Inputs must already be clipped. */
qmgeo_status qmgeo_quantize_vector(const qmgeo_quantizer* quantizer,
                                   const double* values, size_t count,
                                   uint64_t seed, int32_t* levels_out,
                                   double* values_out);

/* ---- distributions ---------------------------------------------------- */

size_t qmgeo_dist_size(const qmgeo_dist* dist);
qmgeo_status qmgeo_dist_label(const qmgeo_dist* dist, size_t index,
                              int64_t* out);
qmgeo_status qmgeo_dist_mass(const qmgeo_dist* dist, size_t index, double* out);
void qmgeo_dist_destroy(qmgeo_dist* dist);

/* ---- privacy accounting ------------------------------------------------ */

/* Closed-form per-element pure-DP bound: -(ln p + (R-2) ln(1-p)). */
qmgeo_status qmgeo_eps_pure_scalar(int32_t levels, double p, double* out);

/* dimension * kappa * scalar bound. */
qmgeo_status qmgeo_eps_pure_vector(int32_t levels, double p, int64_t dimension,
                                   double kappa, double* out);

/* Closed-form per-element RDP bound at order alpha. */
qmgeo_status qmgeo_eps_rdp_scalar(int32_t levels, double p, double alpha,
                                  double* out);

/* kappa^2 * dimension * scalar RDP bound; refused for alpha > 2 because the
 * subsampling amplification step is only stated there. */
qmgeo_status qmgeo_eps_rdp_vector(int32_t levels, double p, double alpha,
                                  int64_t dimension, double kappa, double* out);

/* Exhaustive sup log-ratio of output probabilities over an input grid
 * (uniform grid of [-w_max, w_max] plus all level values); +infinity when a
 * level is reachable for one input and unreachable for another. */
qmgeo_status qmgeo_eps_oracle(const qmgeo_quantizer* quantizer,
                              qmgeo_mechanism mechanism, int32_t grid_points,
                              double* out);

/* Direct-summation Renyi divergence of the extremal distribution pair.
 * renyi_exact uses properly normalized distributions; renyi_shifted keeps
 * the shorter truncation normalizer and shifted reversal that the closed
 * form tracks. Either output pointer may be NULL. */
qmgeo_status qmgeo_rdp_extremal_oracle(int32_t levels, double p, double alpha,
                                       double* renyi_exact,
                                       double* renyi_shifted);

qmgeo_status qmgeo_compose_rounds(double per_round_eps, int64_t rounds,
                                  double* out);
qmgeo_status qmgeo_rdp_to_dp(double eps_rdp, double alpha, double delta,
                             double* out);

/* Full accountant report as a JSON document. The input JSON mirrors the CLI
 * privacy block: R, p, d, kappa, alpha, optional delta, optional oracle
 * block {w_max, mode, gamma, grid_points, mechanism}. */
qmgeo_status qmgeo_privacy_report_json(const char* params_json,
                                       char** out_json);

/* Sweep tables: (p, eps_closed_form) and (alpha, eps_closed_form,
 * eps_oracle). */
qmgeo_status qmgeo_privacy_sweep_p(int32_t levels, double from, double to,
                                   int32_t count, qmgeo_table** out);
qmgeo_status qmgeo_privacy_sweep_alpha(int32_t levels, double p, double from,
                                       double to, int32_t count,
                                       qmgeo_table** out);

/* ---- tables ------------------------------------------------------------ */

size_t qmgeo_table_rows(const qmgeo_table* table);
size_t qmgeo_table_cols(const qmgeo_table* table);
const char* qmgeo_table_col_name(const qmgeo_table* table, size_t col);
qmgeo_status qmgeo_table_cell(const qmgeo_table* table, size_t row, size_t col,
                              double* out);
void qmgeo_table_destroy(qmgeo_table* table);

/* ---- federated simulation ---------------------------------------------- */

/* Runs the deterministic simulation described by the JSON config (the CLI's
 * "fl" block). Produces the per-round metrics table (columns: round,
 * train_loss, holdout_accuracy, delta_norm, grad_dot_delta, eps_round_pure,
 * eps_round_rdp, eps_cumulative) and a JSON run summary that echoes the
 * parsed config. Either output may be NULL. */
qmgeo_status qmgeo_fl_run(const char* config_json, qmgeo_table** metrics,
                          char** summary_json);

/* ---- optimality gap ----------------------------------------------------- */

/* Gap recursion G_t = X*G_{t-1} + Y_t + Z_t over a measured perturbation
 * trace. bound_out must hold `rounds` entries. no_contraction_flag (optional)
 * is set to 1 when the contraction factor X lies outside (0, 1). */
qmgeo_status qmgeo_gap_bound(double smoothness, double pl_constant,
                             double step_size, double initial_gap,
                             const double* delta_norm_sq,
                             const double* grad_dot_delta, size_t rounds,
                             double* bound_out, int32_t* no_contraction_flag);

/* Checks the per-round descent inequality against measured losses; holds_out
 * must hold `rounds` entries and receives 1/0 flags. */
qmgeo_status qmgeo_descent_check(double smoothness, double pl_constant,
                                 double step_size, double f_star, double f0,
                                 const double* loss,
                                 const double* delta_norm_sq,
                                 const double* grad_dot_delta, size_t rounds,
                                 uint8_t* holds_out);

#ifdef __cplusplus
}
#endif

#endif /* QMGEO_QMGEO_H_ */
