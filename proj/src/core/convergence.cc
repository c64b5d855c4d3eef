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

#include "core/convergence.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmgeo {

void BoundParams::Validate() const {
  if (!(smoothness > 0.0) || !(pl_constant > 0.0) || !(step_size > 0.0)) {
    throw std::invalid_argument(
        "BoundParams: smoothness, pl_constant and step_size must be > 0");
  }
}

double ContractionFactor(const BoundParams& params) {
  params.Validate();
  return 1.0 - 2.0 * params.pl_constant * params.step_size *
                   (1.0 - params.step_size * params.smoothness / 2.0);
}

StepTerms ComputeStepTerms(const BoundParams& params, double delta_norm_sq,
                           double grad_dot_delta) {
  StepTerms terms;
  terms.x = ContractionFactor(params);
  terms.y = params.step_size * params.step_size * (params.smoothness / 2.0) *
            delta_norm_sq;
  terms.z = params.step_size * (params.step_size * params.smoothness - 1.0) *
            grad_dot_delta;
  return terms;
}

GapBoundResult GapBound(const BoundParams& params,
                        std::span<const double> delta_norm_sq,
                        std::span<const double> grad_dot_delta) {
  if (delta_norm_sq.size() != grad_dot_delta.size()) {
    throw std::invalid_argument("GapBound: trace columns differ in length");
  }
  const double x = ContractionFactor(params);
  GapBoundResult result;
  result.no_contraction = !(x > 0.0 && x < 1.0);
  result.bound.reserve(delta_norm_sq.size());
  double gap = params.initial_gap;
  for (std::size_t t = 0; t < delta_norm_sq.size(); ++t) {
    const StepTerms terms =
        ComputeStepTerms(params, delta_norm_sq[t], grad_dot_delta[t]);
    gap = x * gap + terms.y + terms.z;
    result.bound.push_back(gap);
  }
  return result;
}

std::vector<bool> VerifyDescentInequality(
    const BoundParams& params, double f_star, double f0,
    std::span<const double> loss, std::span<const double> delta_norm_sq,
    std::span<const double> grad_dot_delta) {
  if (loss.size() != delta_norm_sq.size() ||
      loss.size() != grad_dot_delta.size()) {
    throw std::invalid_argument(
        "VerifyDescentInequality: trace columns differ in length");
  }
  const double x = ContractionFactor(params);
  std::vector<bool> holds;
  holds.reserve(loss.size());
  double previous_gap = f0 - f_star;
  for (std::size_t t = 0; t < loss.size(); ++t) {
    const StepTerms terms =
        ComputeStepTerms(params, delta_norm_sq[t], grad_dot_delta[t]);
    const double rhs = x * previous_gap + terms.y + terms.z;
    const double gap = loss[t] - f_star;
    const double slack = 1e-9 * std::max(1.0, std::abs(rhs));
    holds.push_back(gap <= rhs + slack);
    previous_gap = gap;
  }
  return holds;
}

}  // namespace qmgeo
