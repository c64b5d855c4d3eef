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

#ifndef QMGEO_CORE_RANDOM_H_
#define QMGEO_CORE_RANDOM_H_

#include <cstdint>

namespace qmgeo {

// Splitmix64 finalizer; full-avalanche 64-bit mix.
std::uint64_t Mix64(std::uint64_t x);

// Deterministic splitmix64 stream. Substreams for structured keys
// (master seed, tag, round, client) and per-index derivation make draws
// independent of evaluation order, which keeps simulations reproducible
// across refactors and parallel schedules.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t NextU64();

  // Uniform in [0, 1) with 53-bit resolution.
  double NextUnit();

  // Uniform integer in [0, n), unbiased via rejection. n must be > 0.
  std::uint64_t NextBelow(std::uint64_t n);

  // Standard normal (Box-Muller, two uniforms per draw).
  double NextGaussian();

  // Independent substream keyed by salt. Does not advance this stream.
  RandomStream Derive(std::uint64_t salt) const;

  // Substream for a structured key such as (seed, tag, round, client).
  static RandomStream ForKey(std::uint64_t master, std::uint64_t tag,
                             std::uint64_t a = 0, std::uint64_t b = 0);

 private:
  std::uint64_t state_;
};

}  // namespace qmgeo

#endif  // QMGEO_CORE_RANDOM_H_
