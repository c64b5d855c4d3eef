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

#include "core/truncated_geometric.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qmgeo {
namespace {

// 1 - (1-p)^m without cancellation for small p.
double OneMinusQPow(double p, int m) {
  return -std::expm1(static_cast<double>(m) * std::log1p(-p));
}

}  // namespace

void TGeoParams::Validate() const {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("TGeoParams: p must lie in (0, 1]");
  }
  if (support_size < 1) {
    throw std::invalid_argument("TGeoParams: support_size must be >= 1");
  }
}

DiscreteDistribution TgeoPmf(const TGeoParams& params) {
  params.Validate();
  const double q = 1.0 - params.p;
  const double normalizer = OneMinusQPow(params.p, params.support_size);
  std::vector<std::int64_t> support(params.support_size);
  std::vector<double> masses(params.support_size);
  double term = params.p;
  for (int k = 1; k <= params.support_size; ++k) {
    support[k - 1] = k;
    masses[k - 1] = term / normalizer;
    term *= q;
  }
  return DiscreteDistribution(std::move(support), std::move(masses));
}

double TgeoMeanClosedForm(const TGeoParams& params) {
  params.Validate();
  if (params.p == 1.0) {
    return TgeoPmf(params).BruteForceMoments().mean;  // point mass at 1
  }
  const double q = 1.0 - params.p;
  const int b = params.support_size + 1;
  const double numerator = 1.0 - b * std::pow(q, b - 1) +
                           (b - 1) * std::pow(q, b);
  const double denominator = params.p * OneMinusQPow(params.p, b - 1);
  return numerator / denominator;
}

double TgeoVarianceClosedForm(const TGeoParams& params) {
  params.Validate();
  const double q = 1.0 - params.p;
  const double b = static_cast<double>(params.support_size + 1);
  const double numerator = (1.0 + std::pow(q, 2.0 * b)) * q -
                           std::pow(q, b) * (1.0 + q * q) * b * b +
                           std::pow(q, b + 1.0) * (b * b - 1.0);
  const double denominator =
      (1.0 - q) * (1.0 - q) * std::pow(1.0 - std::pow(q, b), 2.0);
  return numerator / denominator;
}

}  // namespace qmgeo
