// Copyright 2026 QMGeo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMGEO_CORE_CONVERGENCE_H_
#define QMGEO_CORE_CONVERGENCE_H_

#include <cstdint>
#include <span>
#include <vector>

namespace qmgeo {

// Constants of the per-step descent inequality. All must be positive;
// pl_constant > smoothness is accepted (the checker exists to expose
// inconsistent constants) but marks the parameters as inconsistent.
struct BoundParams {
  double smoothness;   // L
  double pl_constant;  // mu
  double step_size;    // eta
  double initial_gap;  // F(w_0) - F*
  void Validate() const;
  bool PlConsistent() const { return pl_constant <= smoothness; }
};

struct StepTerms {
  double x;  // contraction factor 1 - 2*mu*eta*(1 - eta*L/2)
  double y;  // eta^2 * (L/2) * |delta|^2
  double z;  // eta * (eta*L - 1) * <grad, delta>
};

double ContractionFactor(const BoundParams& params);
StepTerms ComputeStepTerms(const BoundParams& params, double delta_norm_sq,
                           double grad_dot_delta);

struct GapBoundResult {
  // bound[t-1] caps F(w_t) - F* after round t; every recorded round
  // contributes through the recursion G_t = X*G_{t-1} + Y_t + Z_t with
  // G_0 = initial_gap.
  std::vector<double> bound;
  bool no_contraction;  // set when X is outside (0, 1)
};

GapBoundResult GapBound(const BoundParams& params,
                        std::span<const double> delta_norm_sq,
                        std::span<const double> grad_dot_delta);

// Per-round check of the one-step inequality against measured losses:
// loss[t] - f_star <= X*(previous gap) + Y_t + Z_t, with a relative slack of
// 1e-9 for the equality case. loss[t] is the loss after round t+1; f0 is the
// loss at the initial iterate.
std::vector<bool> VerifyDescentInequality(const BoundParams& params,
                                          double f_star, double f0,
                                          std::span<const double> loss,
                                          std::span<const double> delta_norm_sq,
                                          std::span<const double> grad_dot_delta);

}  // namespace qmgeo

#endif  // QMGEO_CORE_CONVERGENCE_H_
