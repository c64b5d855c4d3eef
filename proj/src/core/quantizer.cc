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

#include "core/quantizer.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "core/truncated_geometric.h"

namespace qmgeo {

void QuantizerConfig::Validate() const {
  if (levels < 2) {
    throw std::invalid_argument("QuantizerConfig: levels must be >= 2");
  }
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("QuantizerConfig: p must lie in (0, 1]");
  }
  if (!(w_max > 0.0)) {
    throw std::invalid_argument("QuantizerConfig: w_max must be > 0");
  }
  if (!(gamma >= 0.0 && gamma < 0.5)) {
    throw std::invalid_argument("QuantizerConfig: gamma must lie in [0, 0.5)");
  }
}

void ClipInPlace(std::span<double> values, double w_max) {
  if (!(w_max > 0.0)) {
    throw std::invalid_argument("ClipInPlace: w_max must be > 0");
  }
  for (double& v : values) {
    v = std::min(std::max(v, -w_max), w_max);
  }
}

std::vector<double> ClipElementwise(std::span<const double> values,
                                    double w_max) {
  std::vector<double> out(values.begin(), values.end());
  ClipInPlace(out, w_max);
  return out;
}

Quantizer::Quantizer(QuantizerConfig config) : config_(config) {
  config_.Validate();
}

double Quantizer::BinValue(int level) const {
  if (level < 0 || level >= config_.levels) {
    throw std::out_of_range("BinValue: level " + std::to_string(level) +
                            " outside [0, " +
                            std::to_string(config_.levels - 1) + "]");
  }
  // r/(R-1) first so the endpoints come out exact.
  return -config_.w_max +
         2.0 * config_.w_max *
             (static_cast<double>(level) / (config_.levels - 1));
}

double Quantizer::BinWidth() const {
  return 2.0 * config_.w_max / (config_.levels - 1);
}

int Quantizer::IntervalIndex(double w) const {
  if (!(std::fabs(w) <= config_.w_max)) {
    throw std::domain_error("IntervalIndex: |w| exceeds w_max; clip first");
  }
  int r = static_cast<int>(std::floor((w + config_.w_max) / BinWidth()));
  r = std::clamp(r, 0, config_.levels - 2);
  // Repair floating-point drift so that w in [BinValue(r), BinValue(r+1))
  // holds exactly, with w == +w_max assigned to the last interval.
  while (r < config_.levels - 2 && w >= BinValue(r + 1)) ++r;
  while (r > 0 && w < BinValue(r)) --r;
  return r;
}

double Quantizer::MixtureWeight(double w) const {
  const int r = IntervalIndex(w);
  const double width = BinValue(r + 1) - BinValue(r);
  double mu = (BinValue(r + 1) - w) / width;
  if (config_.mode == QuantizerMode::kDpSafe) {
    return std::clamp(mu, config_.gamma, 1.0 - config_.gamma);
  }
  return std::clamp(mu, 0.0, 1.0);
}

DiscreteDistribution Quantizer::OutputDistribution(double w) const {
  const int r = IntervalIndex(w);
  const double mu = MixtureWeight(w);
  const int levels = config_.levels;
  std::vector<double> masses(levels, 0.0);
  // Lower component walks down from level r, upper component walks up from
  // level r+1; together they reach every level.
  const DiscreteDistribution lower = TgeoPmf({config_.p, r + 1});
  for (int k = 1; k <= r + 1; ++k) {
    masses[r - (k - 1)] += mu * lower.masses()[k - 1];
  }
  const DiscreteDistribution upper = TgeoPmf({config_.p, levels - 1 - r});
  for (int k = 1; k <= levels - 1 - r; ++k) {
    masses[r + k] += (1.0 - mu) * upper.masses()[k - 1];
  }
  std::vector<std::int64_t> support(levels);
  for (int i = 0; i < levels; ++i) support[i] = i;
  return DiscreteDistribution(std::move(support), std::move(masses));
}

DiscreteDistribution Quantizer::KLevelDistribution(double w) const {
  const int r = IntervalIndex(w);
  const double width = BinValue(r + 1) - BinValue(r);
  const double up = (w - BinValue(r)) / width;
  std::vector<double> masses(config_.levels, 0.0);
  masses[r] = 1.0 - up;
  masses[r + 1] += up;
  std::vector<std::int64_t> support(config_.levels);
  for (int i = 0; i < config_.levels; ++i) support[i] = i;
  return DiscreteDistribution(std::move(support), std::move(masses));
}

QuantizedValue Quantizer::QuantizeScalar(double w, RandomStream& stream) const {
  const int level =
      static_cast<int>(OutputDistribution(w).Sample(stream));
  return {level, BinValue(level)};
}

std::vector<QuantizedValue> Quantizer::QuantizeVector(
    std::span<const double> values, const RandomStream& stream) const {
  std::vector<QuantizedValue> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(std::fabs(values[i]) <= config_.w_max)) {
      throw std::domain_error("QuantizeVector: element " + std::to_string(i) +
                              " exceeds w_max; clip first");
    }
    RandomStream element_stream = stream.Derive(i);
    out.push_back(QuantizeScalar(values[i], element_stream));
  }
  return out;
}

}  // namespace qmgeo
