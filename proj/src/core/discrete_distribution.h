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

#ifndef QMGEO_CORE_DISCRETE_DISTRIBUTION_H_
#define QMGEO_CORE_DISCRETE_DISTRIBUTION_H_

#include <cstdint>
#include <vector>

#include "core/random.h"

namespace qmgeo {

// Probability masses over a finite, strictly increasing integer support.
// Invariants enforced at construction: masses are non-negative with total
// within 1e-12 of one, and labels carry no duplicates. Zero masses are
// allowed; they mark unreachable outcomes.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<std::int64_t> support,
                       std::vector<double> masses);

  const std::vector<std::int64_t>& support() const { return support_; }
  const std::vector<double>& masses() const { return masses_; }
  std::size_t size() const { return support_.size(); }

  struct Moments {
    double mean;
    double variance;
  };
  // Exact first and second moments by direct summation.
  Moments BruteForceMoments() const;

  // Inverse-CDF lookup at u in [0, 1). Deterministic: the label whose
  // cumulative mass first exceeds u.
  std::int64_t SampleAt(double u) const;
  std::int64_t Sample(RandomStream& stream) const;

 private:
  std::vector<std::int64_t> support_;
  std::vector<double> masses_;
  std::vector<double> cumulative_;
};

// Order-alpha Renyi divergence between same-support distributions,
// accumulated in the log domain so large mass ratios do not overflow.
// Returns +infinity when P has mass where Q has none.
double RenyiDivergence(const DiscreteDistribution& p,
                       const DiscreteDistribution& q, double alpha);

}  // namespace qmgeo

#endif  // QMGEO_CORE_DISCRETE_DISTRIBUTION_H_
