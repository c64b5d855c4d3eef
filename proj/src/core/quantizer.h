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

#ifndef QMGEO_CORE_QUANTIZER_H_
#define QMGEO_CORE_QUANTIZER_H_

#include <span>
#include <vector>

#include "core/discrete_distribution.h"
#include "core/random.h"

namespace qmgeo {

// kLiteral keeps the raw mixture weight, so inputs sitting exactly on the
// outermost levels silence one mixture component and some output levels get
// zero mass. kDpSafe clamps the weight into [gamma, 1-gamma], keeping every
// level reachable for every input.
enum class QuantizerMode { kLiteral, kDpSafe };

struct QuantizerConfig {
  int levels;     // R >= 2
  double p;       // geometric success probability, (0, 1]
  double w_max;   // clipping bound, > 0
  QuantizerMode mode = QuantizerMode::kDpSafe;
  double gamma = 0.25;  // mixture-weight floor, [0, 0.5); dp-safe only
  void Validate() const;
};

struct QuantizedValue {
  int level;     // r in [0, R-1]
  double value;  // the level's grid value
};

// Element-wise clamp into [-w_max, w_max]. Idempotent.
void ClipInPlace(std::span<double> values, double w_max);
std::vector<double> ClipElementwise(std::span<const double> values,
                                    double w_max);

// Randomized scalar quantizer onto R evenly spaced levels spanning
// [-w_max, w_max]. The output level is drawn from a two-component mixture of
// truncated geometric distributions anchored at the interval containing the
// input, so levels far from the input keep geometrically decaying mass.
class Quantizer {
 public:
  explicit Quantizer(QuantizerConfig config);

  const QuantizerConfig& config() const { return config_; }

  // Grid value of level r: -w_max + 2*r*w_max/(R-1).
  double BinValue(int level) const;
  double BinWidth() const;

  // Index r of the half-open interval [BinValue(r), BinValue(r+1)) holding w;
  // w == +w_max maps to R-2. Throws std::domain_error outside the clip range.
  int IntervalIndex(double w) const;

  // Weight of the lower mixture component, (BinValue(r+1) - w) / width.
  // Clamped into [gamma, 1-gamma] in dp-safe mode.
  double MixtureWeight(double w) const;

  // Distribution over level indices {0, ..., R-1} for input w.
  DiscreteDistribution OutputDistribution(double w) const;

  // Conventional stochastic rounding to the two neighbouring levels; its
  // expectation equals w exactly. Kept as the baseline mechanism.
  DiscreteDistribution KLevelDistribution(double w) const;

  QuantizedValue QuantizeScalar(double w, RandomStream& stream) const;

  // Element i draws from stream.Derive(i), so results do not depend on
  // evaluation order. All inputs must already be clipped.
  std::vector<QuantizedValue> QuantizeVector(std::span<const double> values,
                                             const RandomStream& stream) const;

 private:
  QuantizerConfig config_;
};

}  // namespace qmgeo

#endif  // QMGEO_CORE_QUANTIZER_H_
