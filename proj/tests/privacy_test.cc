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

#include "core/privacy.h"
#include "core/quantizer.h"

namespace {

using qmgeo::BuildPrivacyReport;
using qmgeo::ComposeRounds;
using qmgeo::MechanismKind;
using qmgeo::PrivacyParams;
using qmgeo::PureDpEpsilonOracle;
using qmgeo::PureDpEpsilonOraclePerLevel;
using qmgeo::PureDpEpsilonScalar;
using qmgeo::PureDpEpsilonVector;
using qmgeo::Quantizer;
using qmgeo::QuantizerConfig;
using qmgeo::QuantizerMode;
using qmgeo::RdpEpsilonScalar;
using qmgeo::RdpEpsilonVector;
using qmgeo::RdpExtremalOracle;
using qmgeo::RdpOracleResult;
using qmgeo::RdpToDp;
using qmgeo::SweepEpsVsP;
using qmgeo::SweepRdpVsAlpha;

constexpr double kInf = std::numeric_limits<double>::infinity();

QuantizerConfig Config(int levels, double p, QuantizerMode mode,
                       double gamma = 0.25) {
  QuantizerConfig config;
  config.levels = levels;
  config.p = p;
  config.w_max = 0.05;
  config.mode = mode;
  config.gamma = gamma;
  return config;
}

// Plain long-double evaluation of the shifted extremal sum, independent of
// the log-domain implementation.
double ShiftedSumLongDouble(int levels, double p, double alpha) {
  const long double q = 1.0L - static_cast<long double>(p);
  const long double norm = 1.0L - powl(q, levels - 1);
  long double sum = 0.0L;
  for (int i = 1; i <= levels; ++i) {
    const long double forward = p * powl(q, i - 1) / norm;
    const long double reversed = p * powl(q, levels + 1 - i) / norm;
    sum += powl(forward, static_cast<long double>(alpha)) /
           powl(reversed, static_cast<long double>(alpha - 1.0));
  }
  return static_cast<double>(logl(sum) / (alpha - 1.0L));
}

}  // namespace

TEST_CASE("pure-DP scalar closed form") {
  CHECK(PureDpEpsilonScalar(8, 0.5) ==
        doctest::Approx(4.8520302639196172).epsilon(1e-13));
  CHECK(PureDpEpsilonScalar(2, 0.5) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(PureDpEpsilonScalar(8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(PureDpEpsilonScalar(8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PureDpEpsilonScalar(1, 0.5), std::invalid_argument);

  double previous = 0.0;
  for (double p = 0.5; p <= 0.99; p += 0.01) {
    const double eps = PureDpEpsilonScalar(8, p);
    CHECK(eps > previous);
    previous = eps;
  }
}

TEST_CASE("pure-DP vector bound composes linearly") {
  CHECK(PureDpEpsilonVector(8, 0.5, 1, 1.0) == PureDpEpsilonScalar(8, 0.5));
  CHECK(PureDpEpsilonVector(8, 0.5, 3562, 0.005333) ==
        doctest::Approx(92.16987528983558).epsilon(1e-12));
  CHECK(PureDpEpsilonVector(8, 0.5, 2, 1.0) ==
        doctest::Approx(2.0 * PureDpEpsilonScalar(8, 0.5)).epsilon(1e-14));
}

TEST_CASE("RDP scalar closed form reproduces the reference values") {
  CHECK(RdpEpsilonScalar(8, 0.9, 2.0) ==
        doctest::Approx(25.91722328817021).epsilon(1e-12));
  CHECK(RdpEpsilonScalar(8, 0.5, 2.0) ==
        doctest::Approx(7.7659934966403004).epsilon(1e-12));
  CHECK(RdpEpsilonScalar(16, 0.9, 2.0) ==
        doctest::Approx(44.337903932122572).epsilon(1e-12));
  // Stable in the log domain where q^((2a-1)R) would overflow a double.
  CHECK(std::isfinite(RdpEpsilonScalar(64, 0.99, 10.0)));
}

TEST_CASE("subsampled vector RDP matches the reported per-round levels") {
  const double kappa = 0.005333;
  CHECK(RdpEpsilonVector(8, 0.9, 2.0, 3562, kappa) ==
        doctest::Approx(2.6255817975298018).epsilon(1e-12));
  CHECK(RdpEpsilonVector(16, 0.9, 2.0, 3562, kappa) ==
        doctest::Approx(4.4917154978535876).epsilon(1e-12));
  CHECK(RdpEpsilonVector(8, 0.5, 2.0, 3562, kappa) ==
        doctest::Approx(0.78674520560312575).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(RdpEpsilonVector(8, 0.5, 2.5, 3562, kappa),
                       doctest::Contains("alpha <= 2"), std::invalid_argument);
}

TEST_CASE("pure-DP oracle: stochastic rounding cannot be private at R >= 4") {
  for (int levels : {4, 5, 8, 16}) {
    const Quantizer quantizer(
        Config(levels, 0.5, QuantizerMode::kDpSafe, 0.25));
    CHECK(PureDpEpsilonOracle(quantizer, MechanismKind::kKLevel, 64) == kInf);
  }
}

TEST_CASE("pure-DP oracle: literal mode degenerates at the outer levels") {
  const Quantizer quantizer(Config(8, 0.5, QuantizerMode::kLiteral));
  CHECK(PureDpEpsilonOracle(quantizer, MechanismKind::kMixedGeometric, 64) ==
        kInf);
}

TEST_CASE("pure-DP oracle: dp-safe mode is finite and within the clamp bound") {
  for (int levels : {4, 8, 16}) {
    for (double p : {0.5, 0.9}) {
      const Quantizer quantizer(
          Config(levels, p, QuantizerMode::kDpSafe, 0.25));
      const double oracle =
          PureDpEpsilonOracle(quantizer, MechanismKind::kMixedGeometric, 512);
      CHECK(std::isfinite(oracle));
      CHECK(oracle <= std::log(3.0) + PureDpEpsilonScalar(levels, p) + 1e-9);
    }
  }
}

TEST_CASE("pure-DP oracle per-level profile is symmetric under negation") {
  for (int levels : {4, 8, 16}) {
    for (double p : {0.5, 0.9}) {
      const Quantizer quantizer(
          Config(levels, p, QuantizerMode::kDpSafe, 0.25));
      const std::vector<double> per_level = PureDpEpsilonOraclePerLevel(
          quantizer, MechanismKind::kMixedGeometric, 512);
      REQUIRE(per_level.size() == static_cast<std::size_t>(levels));
      for (int v = 0; v < levels; ++v) {
        CHECK(per_level[v] ==
              doctest::Approx(per_level[levels - 1 - v]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("extremal RDP oracle matches the precomputed sums") {
  const RdpOracleResult r8p5 = RdpExtremalOracle(8, 0.5, 2.0);
  CHECK(r8p5.renyi_exact ==
        doctest::Approx(4.2963283157006843).epsilon(1e-12));
  CHECK(r8p5.renyi_shifted ==
        doctest::Approx(4.9934047744005191).epsilon(1e-12));
  const RdpOracleResult r8p9 = RdpExtremalOracle(8, 0.9, 2.0);
  CHECK(r8p9.renyi_exact ==
        doctest::Approx(16.013735645634077).epsilon(1e-12));
  CHECK(r8p9.renyi_shifted ==
        doctest::Approx(18.316320828628128).epsilon(1e-12));
  const RdpOracleResult r16p9 = RdpExtremalOracle(16, 0.9, 2.0);
  CHECK(r16p9.renyi_exact ==
        doctest::Approx(34.434416379586443).epsilon(1e-12));
  CHECK(r16p9.renyi_shifted ==
        doctest::Approx(36.737001472580489).epsilon(1e-12));

  // Single level: the extremal pair coincides.
  const RdpOracleResult degenerate = RdpExtremalOracle(1, 0.5, 2.0);
  CHECK(degenerate.renyi_exact == 0.0);
  CHECK(degenerate.renyi_shifted == 0.0);
}

TEST_CASE("extremal oracle agrees with a high-precision summation") {
  for (int levels : {8, 16}) {
    for (double p : {0.5, 0.9}) {
      const RdpOracleResult result = RdpExtremalOracle(levels, p, 2.0);
      const double reference = ShiftedSumLongDouble(levels, p, 2.0);
      CHECK(std::abs(result.renyi_shifted - reference) <=
            1e-10 * std::abs(reference));
    }
  }
}

TEST_CASE("closed form and shifted sum differ by the documented factor") {
  const double alpha = 2.0;
  for (int levels : {8, 16}) {
    for (double p : {0.5, 0.9}) {
      const double closed = RdpEpsilonScalar(levels, p, alpha);
      const double shifted = RdpExtremalOracle(levels, p, alpha).renyi_shifted;
      const double ratio = std::exp((alpha - 1.0) * closed) /
                           std::exp((alpha - 1.0) * shifted);
      const double expected =
          alpha * std::pow(1.0 - p, -(2.0 * alpha - 1.0));
      CHECK(std::abs(ratio - expected) <= 1e-6 * expected);
    }
  }
}

TEST_CASE("round composition and RDP conversion") {
  CHECK(ComposeRounds(0.784, 1) == 0.784);
  CHECK(ComposeRounds(0.784, 10) == doctest::Approx(7.84).epsilon(1e-14));
  CHECK(ComposeRounds(0.0, 1000) == 0.0);
  CHECK_THROWS_AS(ComposeRounds(-0.1, 2), std::invalid_argument);

  CHECK(RdpToDp(1.0, 2.0, 1.0) == 1.0);
  CHECK(RdpToDp(0.0, 2.0, std::exp(-1.0)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(RdpToDp(2.626, 2.0, 1e-5) ==
        doctest::Approx(14.138925464970228).epsilon(1e-13));
  CHECK_THROWS_AS(RdpToDp(1.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("sweeps cover the documented trends") {
  const auto vs_p = SweepEpsVsP(8, 0.5, 0.99, 50);
  REQUIRE(vs_p.size() == 50);
  for (std::size_t i = 1; i < vs_p.size(); ++i) {
    CHECK(vs_p[i].eps_closed_form > vs_p[i - 1].eps_closed_form);
  }
  // Unbounded growth as p approaches 1.
  CHECK(SweepEpsVsP(8, 0.999, 0.999, 1)[0].eps_closed_form > 40.0);

  const auto vs_alpha = SweepRdpVsAlpha(8, 0.5, 1.25, 10.0, 36);
  REQUIRE(vs_alpha.size() == 36);
  for (const auto& row : vs_alpha) {
    CHECK(std::isfinite(row.eps_closed_form));
    CHECK(row.eps_closed_form > 0.0);
    CHECK(std::isfinite(row.eps_oracle));
    CHECK(row.eps_oracle > 0.0);
  }
}

TEST_CASE("privacy report carries both the closed form and the oracle") {
  PrivacyParams params;
  params.levels = 8;
  params.p = 0.9;
  params.dimension = 3562;
  params.kappa = 0.005333;
  params.alpha = 2.0;
  const auto report =
      BuildPrivacyReport(params, Config(8, 0.9, QuantizerMode::kDpSafe, 0.25),
                         MechanismKind::kMixedGeometric, 512);
  CHECK(report.eps_rdp_vector == doctest::Approx(2.6255817975298018));
  CHECK(report.eps_pure_scalar == doctest::Approx(13.920871073622103));
  CHECK(std::isfinite(report.eps_oracle_scalar));
  CHECK(report.rdp_oracle_scalar == doctest::Approx(16.013735645634077));
  CHECK(report.rdp_oracle_shifted == doctest::Approx(18.316320828628128));
  CHECK(report.mechanism_mode == "dp-safe");
  CHECK(!report.notes.empty());
}
