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

#include "core/random.h"

#include <cmath>
#include <stdexcept>

namespace qmgeo {
namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr double kTwoPi = 6.283185307179586476925287;
}  // namespace

std::uint64_t Mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t RandomStream::NextU64() {
  state_ += kGolden;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double RandomStream::NextUnit() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::NextBelow(std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("RandomStream::NextBelow: n must be > 0");
  }
  const std::uint64_t threshold = (-n) % n;  // 2^64 mod n
  std::uint64_t x = NextU64();
  while (x < threshold) {
    x = NextU64();
  }
  return x % n;
}

double RandomStream::NextGaussian() {
  const double u1 = 1.0 - NextUnit();  // (0, 1], keeps log finite
  const double u2 = NextUnit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

RandomStream RandomStream::Derive(std::uint64_t salt) const {
  return RandomStream(Mix64(state_ ^ Mix64(salt)));
}

RandomStream RandomStream::ForKey(std::uint64_t master, std::uint64_t tag,
                                  std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = Mix64(master);
  s = Mix64(s + tag);
  s = Mix64(s + a);
  s = Mix64(s + b);
  return RandomStream(s);
}

}  // namespace qmgeo
