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

#include "core/discrete_distribution.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qmgeo {
namespace {
constexpr double kMassTolerance = 1e-12;
}

DiscreteDistribution::DiscreteDistribution(std::vector<std::int64_t> support,
                                           std::vector<double> masses)
    : support_(std::move(support)), masses_(std::move(masses)) {
  if (support_.empty() || support_.size() != masses_.size()) {
    throw std::invalid_argument(
        "DiscreteDistribution: support and masses must be non-empty and of "
        "equal length");
  }
  for (std::size_t i = 1; i < support_.size(); ++i) {
    if (support_[i] <= support_[i - 1]) {
      throw std::invalid_argument(
          "DiscreteDistribution: support labels must be strictly increasing");
    }
  }
  double total = 0.0;
  for (double m : masses_) {
    if (!(m >= 0.0)) {
      throw std::invalid_argument(
          "DiscreteDistribution: masses must be non-negative");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::invalid_argument(
        "DiscreteDistribution: masses must sum to 1 within 1e-12");
  }
  cumulative_.resize(masses_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    acc += masses_[i];
    cumulative_[i] = acc;
  }
  cumulative_.back() = 1.0;
}

DiscreteDistribution::Moments DiscreteDistribution::BruteForceMoments() const {
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const double k = static_cast<double>(support_[i]);
    mean += k * masses_[i];
    second += k * k * masses_[i];
  }
  return {mean, std::max(0.0, second - mean * mean)};
}

std::int64_t DiscreteDistribution::SampleAt(double u) const {
  if (!(u >= 0.0 && u < 1.0)) {
    throw std::invalid_argument("SampleAt: u must lie in [0, 1)");
  }
  // First label whose cumulative mass strictly exceeds u; zero-mass labels
  // leave the cumulative flat and are never selected.
  const auto it =
      std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const std::size_t idx =
      it == cumulative_.end() ? cumulative_.size() - 1
                              : static_cast<std::size_t>(it - cumulative_.begin());
  return support_[idx];
}

std::int64_t DiscreteDistribution::Sample(RandomStream& stream) const {
  return SampleAt(stream.NextUnit());
}

double RenyiDivergence(const DiscreteDistribution& p,
                       const DiscreteDistribution& q, double alpha) {
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("RenyiDivergence: alpha must be > 1");
  }
  if (p.support() != q.support()) {
    throw std::invalid_argument(
        "RenyiDivergence: distributions must share a support");
  }
  std::vector<double> terms;
  terms.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.masses()[i];
    const double qi = q.masses()[i];
    if (pi == 0.0) continue;
    if (qi == 0.0) return std::numeric_limits<double>::infinity();
    terms.push_back(alpha * std::log(pi) + (1.0 - alpha) * std::log(qi));
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  double result = (peak + std::log(sum)) / (alpha - 1.0);
  if (result < 0.0 && result > -1e-9) result = 0.0;  // P == Q rounding
  return result;
}

}  // namespace qmgeo
