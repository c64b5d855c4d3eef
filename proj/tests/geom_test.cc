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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "core/discrete_distribution.h"
#include "core/random.h"
#include "core/truncated_geometric.h"

namespace {

using qmgeo::DiscreteDistribution;
using qmgeo::RandomStream;
using qmgeo::RenyiDivergence;
using qmgeo::TGeoParams;
using qmgeo::TgeoMeanClosedForm;
using qmgeo::TgeoPmf;
using qmgeo::TgeoVarianceClosedForm;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Reversal of a truncated geometric on {1..m}: Q(k) = P(m+1-k).
DiscreteDistribution ReversedTgeo(double p, int m) {
  const DiscreteDistribution forward = TgeoPmf({p, m});
  std::vector<double> masses(forward.masses().rbegin(),
                             forward.masses().rend());
  return DiscreteDistribution(std::vector<std::int64_t>(forward.support()),
                              std::move(masses));
}

// Independent long-double accumulation of the Renyi sum, used to charge the
// log-domain implementation with a stricter oracle.
double RenyiDirectLongDouble(const DiscreteDistribution& p,
                             const DiscreteDistribution& q, double alpha) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const long double pi = p.masses()[i];
    const long double qi = q.masses()[i];
    if (pi == 0.0L) continue;
    sum += powl(pi, static_cast<long double>(alpha)) *
           powl(qi, static_cast<long double>(1.0 - alpha));
  }
  return static_cast<double>(logl(sum) / (alpha - 1.0L));
}

}  // namespace

TEST_CASE("tgeo pmf matches hand-normalized masses") {
  const DiscreteDistribution dist = TgeoPmf({0.5, 3});
  REQUIRE(dist.size() == 3);
  CHECK(dist.support() == std::vector<std::int64_t>{1, 2, 3});
  CHECK(dist.masses()[0] == doctest::Approx(4.0 / 7.0).epsilon(1e-14));
  CHECK(dist.masses()[1] == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
  CHECK(dist.masses()[2] == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("tgeo pmf degenerate cases are point masses") {
  const DiscreteDistribution certain = TgeoPmf({1.0, 5});
  CHECK(certain.masses()[0] == 1.0);
  for (std::size_t k = 1; k < certain.size(); ++k) {
    CHECK(certain.masses()[k] == 0.0);
  }
  const DiscreteDistribution single = TgeoPmf({0.9, 1});
  REQUIRE(single.size() == 1);
  CHECK(single.masses()[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tgeo parameters are validated") {
  CHECK_THROWS_AS(TgeoPmf({0.0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(TgeoPmf({1.5, 3}), std::invalid_argument);
  CHECK_THROWS_AS(TgeoPmf({0.5, 0}), std::invalid_argument);
}

TEST_CASE("pmf normalization and closed-form mean hold across the grid") {
  for (int tenth = 1; tenth <= 9; ++tenth) {
    const double p = tenth / 10.0;
    for (int m = 1; m <= 64; ++m) {
      const DiscreteDistribution dist = TgeoPmf({p, m});
      double total = 0.0;
      for (double mass : dist.masses()) total += mass;
      CHECK(std::abs(total - 1.0) <= 1e-12);
      const double brute = dist.BruteForceMoments().mean;
      const double closed = TgeoMeanClosedForm({p, m});
      CHECK(std::abs(closed - brute) <= 1e-12 * std::abs(brute));
    }
  }
}

TEST_CASE("closed-form mean worked examples") {
  CHECK(TgeoMeanClosedForm({0.5, 3}) ==
        doctest::Approx(11.0 / 7.0).epsilon(1e-13));
  CHECK(TgeoMeanClosedForm({0.5, 1}) == doctest::Approx(1.0).epsilon(1e-13));
  // Mass concentrates at 1 as p -> 1.
  CHECK(TgeoMeanClosedForm({0.999999, 8}) ==
        doctest::Approx(1.0).epsilon(1e-5));
  CHECK(TgeoMeanClosedForm({1.0, 8}) == 1.0);
}

TEST_CASE("brute-force moments on known distributions") {
  const auto tgeo = TgeoPmf({0.5, 3}).BruteForceMoments();
  CHECK(tgeo.mean == doctest::Approx(11.0 / 7.0).epsilon(1e-14));
  CHECK(tgeo.variance == doctest::Approx(26.0 / 49.0).epsilon(1e-12));

  const DiscreteDistribution point({1}, {1.0});
  CHECK(point.BruteForceMoments().mean == 1.0);
  CHECK(point.BruteForceMoments().variance == 0.0);

  const DiscreteDistribution uniform({1, 2}, {0.5, 0.5});
  CHECK(uniform.BruteForceMoments().mean == doctest::Approx(1.5));
  CHECK(uniform.BruteForceMoments().variance == doctest::Approx(0.25));
}

TEST_CASE("published variance form is negative and stays quarantined") {
  // Hand evaluation at p=0.5, support {1,2,3}: exactly -286/225.
  const double printed = TgeoVarianceClosedForm({0.5, 3});
  CHECK(printed == doctest::Approx(-286.0 / 225.0).epsilon(1e-12));
  CHECK(printed < 0.0);
  const double brute = TgeoPmf({0.5, 3}).BruteForceMoments().variance;
  CHECK(brute == doctest::Approx(26.0 / 49.0).epsilon(1e-12));

  // Single-point support: true variance is 0, the printed form is not.
  const double printed_single = TgeoVarianceClosedForm({0.5, 1});
  CHECK(TgeoPmf({0.5, 1}).BruteForceMoments().variance == 0.0);
  CHECK(std::abs(printed_single - 0.0) > 0.1);
}

TEST_CASE("inverse-CDF sampling hits the expected labels") {
  const DiscreteDistribution point({3}, {1.0});
  RandomStream stream(7);
  for (int i = 0; i < 16; ++i) {
    CHECK(point.Sample(stream) == 3);
  }
  const DiscreteDistribution dist = TgeoPmf({0.5, 3});
  CHECK(dist.SampleAt(0.0) == 1);
  CHECK(dist.SampleAt(0.999999) == 3);
  // Zero-mass labels are never selected.
  const DiscreteDistribution gap({0, 1, 2}, {0.5, 0.0, 0.5});
  RandomStream gap_stream(11);
  for (int i = 0; i < 1000; ++i) {
    CHECK(gap.Sample(gap_stream) != 1);
  }
}

TEST_CASE("empirical frequencies track the masses in total variation") {
  const DiscreteDistribution dist = TgeoPmf({0.5, 8});
  RandomStream stream(1234);
  std::vector<int> counts(dist.size(), 0);
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i) {
    ++counts[dist.Sample(stream) - 1];
  }
  double tv = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    tv += std::abs(static_cast<double>(counts[k]) / kDraws - dist.masses()[k]);
  }
  CHECK(tv / 2.0 < 0.005);
}

TEST_CASE("renyi divergence of identical distributions is zero") {
  const DiscreteDistribution dist = TgeoPmf({0.3, 12});
  CHECK(RenyiDivergence(dist, dist, 2.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(RenyiDivergence(dist, dist, 5.5) >= 0.0);
}

TEST_CASE("renyi divergence matches the precomputed extremal value") {
  // Truncated geometric on {1..8} at p=0.5 against its reversal, alpha=2.
  // Direct summation gives sum = (256/255)*2^9*(1-2^-24)/7, log 4.2963283157.
  const DiscreteDistribution forward = TgeoPmf({0.5, 8});
  const DiscreteDistribution backward = ReversedTgeo(0.5, 8);
  const double divergence = RenyiDivergence(forward, backward, 2.0);
  CHECK(divergence == doctest::Approx(4.2963283157006843).epsilon(1e-12));
  CHECK(std::abs(divergence - RenyiDirectLongDouble(forward, backward, 2.0)) <=
        1e-10 * divergence);
}

TEST_CASE("renyi divergence is infinite without absolute continuity") {
  const DiscreteDistribution p({0, 1}, {0.5, 0.5});
  const DiscreteDistribution q({0, 1}, {1.0, 0.0});
  CHECK(RenyiDivergence(p, q, 2.0) == kInf);
  CHECK(std::isfinite(RenyiDivergence(q, p, 2.0)));
}

TEST_CASE("renyi divergence is non-negative and detects equality") {
  RandomStream stream(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int size = 2 + static_cast<int>(stream.NextBelow(10));
    std::vector<std::int64_t> support(size);
    std::vector<double> pm(size), qm(size);
    double p_total = 0.0, q_total = 0.0;
    for (int i = 0; i < size; ++i) {
      support[i] = i;
      pm[i] = 0.05 + stream.NextUnit();
      qm[i] = 0.05 + stream.NextUnit();
      p_total += pm[i];
      q_total += qm[i];
    }
    for (int i = 0; i < size; ++i) {
      pm[i] /= p_total;
      qm[i] /= q_total;
    }
    const DiscreteDistribution p(support, pm);
    const DiscreteDistribution q(support, qm);
    const double alpha = 1.2 + 4.0 * stream.NextUnit();
    CHECK(RenyiDivergence(p, q, alpha) >= 0.0);
    CHECK(RenyiDivergence(p, p, alpha) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("renyi divergence is non-decreasing in alpha on the extremal pair") {
  const DiscreteDistribution forward = TgeoPmf({0.5, 8});
  const DiscreteDistribution backward = ReversedTgeo(0.5, 8);
  double previous = 0.0;
  for (double alpha = 1.25; alpha <= 10.0; alpha += 0.25) {
    const double current = RenyiDivergence(forward, backward, alpha);
    CHECK(current >= previous - 1e-12);
    previous = current;
  }
}

TEST_CASE("distribution invariants are enforced") {
  CHECK_THROWS_AS(DiscreteDistribution({1, 1}, {0.5, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution({1, 2}, {0.6, 0.6}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution({1, 2}, {-0.1, 1.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(RenyiDivergence(TgeoPmf({0.5, 3}), TgeoPmf({0.5, 4}), 2.0),
                  std::invalid_argument);
}
