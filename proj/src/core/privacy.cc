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

#include "core/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "core/truncated_geometric.h"

namespace qmgeo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 - (1-p)^m), stable for q^m near 0 and near 1.
double LogOneMinusQPow(double log_q, double m) {
  return std::log(-std::expm1(m * log_q));
}

void ValidateClosedFormParams(int levels, double p) {
  if (levels < 2) {
    throw std::invalid_argument("privacy: levels must be >= 2");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument(
        "privacy: closed forms require p strictly inside (0, 1)");
  }
}

std::vector<double> LinSpace(double from, double to, int count) {
  if (count < 1) {
    throw std::invalid_argument("sweep: count must be >= 1");
  }
  std::vector<double> xs(count);
  if (count == 1) {
    xs[0] = from;
    return xs;
  }
  for (int i = 0; i < count; ++i) {
    xs[i] = from + (to - from) * (static_cast<double>(i) / (count - 1));
  }
  return xs;
}

}  // namespace

void PrivacyParams::Validate() const {
  ValidateClosedFormParams(levels, p);
  if (dimension < 1) {
    throw std::invalid_argument("PrivacyParams: dimension must be >= 1");
  }
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    throw std::invalid_argument("PrivacyParams: kappa must lie in (0, 1]");
  }
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("PrivacyParams: alpha must be > 1");
  }
}

double PureDpEpsilonScalar(int levels, double p) {
  ValidateClosedFormParams(levels, p);
  return -(std::log(p) + (levels - 2) * std::log1p(-p));
}

double PureDpEpsilonVector(int levels, double p, std::int64_t dimension,
                           double kappa) {
  if (dimension < 1) {
    throw std::invalid_argument("PureDpEpsilonVector: dimension must be >= 1");
  }
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    throw std::invalid_argument(
        "PureDpEpsilonVector: kappa must lie in (0, 1]");
  }
  return static_cast<double>(dimension) * kappa * PureDpEpsilonScalar(levels, p);
}

double RdpEpsilonScalar(int levels, double p, double alpha) {
  ValidateClosedFormParams(levels, p);
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("RdpEpsilonScalar: alpha must be > 1");
  }
  const double r = static_cast<double>(levels);
  const double log_q = std::log1p(-p);
  // log of the bracketed product, term by term:
  //   p * q^(-2a + (1-a)R + 1) / (1 - q^(R-1)) * a (q^((2a-1)R)-1)/(q^(2a-1)-1)
  double log_inner = std::log(p);
  log_inner += (-2.0 * alpha + (1.0 - alpha) * r + 1.0) * log_q;
  log_inner -= LogOneMinusQPow(log_q, r - 1.0);
  log_inner += std::log(alpha);
  log_inner += LogOneMinusQPow(log_q, (2.0 * alpha - 1.0) * r);
  log_inner -= LogOneMinusQPow(log_q, 2.0 * alpha - 1.0);
  return log_inner / (alpha - 1.0);
}

double RdpEpsilonVector(int levels, double p, double alpha,
                        std::int64_t dimension, double kappa) {
  if (alpha > 2.0) {
    throw std::invalid_argument(
        "RdpEpsilonVector: the subsampling amplification step is only stated "
        "for alpha <= 2; use the scalar bound plus your own composition for "
        "larger orders");
  }
  if (dimension < 1) {
    throw std::invalid_argument("RdpEpsilonVector: dimension must be >= 1");
  }
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    throw std::invalid_argument("RdpEpsilonVector: kappa must lie in (0, 1]");
  }
  return kappa * kappa * static_cast<double>(dimension) *
         RdpEpsilonScalar(levels, p, alpha);
}

std::vector<double> PureDpEpsilonOraclePerLevel(const Quantizer& quantizer,
                                                MechanismKind kind,
                                                int grid_points) {
  const QuantizerConfig& cfg = quantizer.config();
  if (grid_points < cfg.levels) {
    throw std::invalid_argument(
        "PureDpEpsilonOracle: grid_points must be >= levels");
  }
  // Uniform grid plus every level value, so the extremal inputs are present.
  std::vector<double> grid;
  grid.reserve(grid_points + cfg.levels);
  for (int i = 0; i < grid_points; ++i) {
    grid.push_back(-cfg.w_max + 2.0 * cfg.w_max *
                                    (static_cast<double>(i) /
                                     (grid_points - 1)));
  }
  for (int r = 0; r < cfg.levels; ++r) {
    grid.push_back(quantizer.BinValue(r));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> min_log(cfg.levels, kInf);
  std::vector<double> max_log(cfg.levels, -kInf);
  std::vector<bool> has_zero(cfg.levels, false);
  std::vector<bool> has_positive(cfg.levels, false);
  for (double w : grid) {
    const DiscreteDistribution dist = kind == MechanismKind::kKLevel
                                          ? quantizer.KLevelDistribution(w)
                                          : quantizer.OutputDistribution(w);
    for (int v = 0; v < cfg.levels; ++v) {
      const double mass = dist.masses()[v];
      if (mass == 0.0) {
        has_zero[v] = true;
        continue;
      }
      has_positive[v] = true;
      const double log_mass = std::log(mass);
      min_log[v] = std::min(min_log[v], log_mass);
      max_log[v] = std::max(max_log[v], log_mass);
    }
  }
  std::vector<double> per_level(cfg.levels, 0.0);
  for (int v = 0; v < cfg.levels; ++v) {
    if (has_zero[v] && has_positive[v]) {
      per_level[v] = kInf;
    } else if (has_positive[v]) {
      per_level[v] = max_log[v] - min_log[v];
    }
    // A level with zero mass everywhere constrains nothing.
  }
  return per_level;
}

double PureDpEpsilonOracle(const Quantizer& quantizer, MechanismKind kind,
                           int grid_points) {
  const std::vector<double> per_level =
      PureDpEpsilonOraclePerLevel(quantizer, kind, grid_points);
  return *std::max_element(per_level.begin(), per_level.end());
}

RdpOracleResult RdpExtremalOracle(int levels, double p, double alpha) {
  if (levels < 1) {
    throw std::invalid_argument("RdpExtremalOracle: levels must be >= 1");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("RdpExtremalOracle: p must lie in (0, 1)");
  }
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("RdpExtremalOracle: alpha must be > 1");
  }
  if (levels == 1) {
    return {0.0, 0.0};  // single-level support: the pair is identical
  }
  const DiscreteDistribution forward = TgeoPmf({p, levels});
  std::vector<double> reversed(forward.masses().rbegin(),
                               forward.masses().rend());
  const DiscreteDistribution backward(
      std::vector<std::int64_t>(forward.support()), std::move(reversed));
  const double exact = RenyiDivergence(forward, backward, alpha);

  // Direct summation of the shifted variant, accumulated in the log domain.
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_norm = LogOneMinusQPow(log_q, levels - 1.0);
  std::vector<double> terms(levels);
  for (int i = 1; i <= levels; ++i) {
    const double log_fwd = log_p + (i - 1) * log_q - log_norm;
    const double log_rev = log_p + (levels + 1 - i) * log_q - log_norm;
    terms[i - 1] = alpha * log_fwd - (alpha - 1.0) * log_rev;
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  const double shifted = (peak + std::log(sum)) / (alpha - 1.0);
  return {exact, shifted};
}

double ComposeRounds(double per_round_eps, std::int64_t rounds) {
  if (!(per_round_eps >= 0.0)) {
    throw std::invalid_argument("ComposeRounds: per_round_eps must be >= 0");
  }
  if (rounds < 1) {
    throw std::invalid_argument("ComposeRounds: rounds must be >= 1");
  }
  return per_round_eps * static_cast<double>(rounds);
}

double RdpToDp(double eps_rdp, double alpha, double delta) {
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("RdpToDp: alpha must be > 1");
  }
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("RdpToDp: delta must lie in (0, 1]");
  }
  return eps_rdp + std::log(1.0 / delta) / (alpha - 1.0);
}

std::vector<SweepRow> SweepEpsVsP(int levels, double from, double to,
                                  int count) {
  std::vector<SweepRow> rows;
  for (double p : LinSpace(from, to, count)) {
    rows.push_back({p, PureDpEpsilonScalar(levels, p),
                    std::numeric_limits<double>::quiet_NaN()});
  }
  return rows;
}

std::vector<SweepRow> SweepRdpVsAlpha(int levels, double p, double from,
                                      double to, int count) {
  std::vector<SweepRow> rows;
  for (double alpha : LinSpace(from, to, count)) {
    rows.push_back({alpha, RdpEpsilonScalar(levels, p, alpha),
                    RdpExtremalOracle(levels, p, alpha).renyi_exact});
  }
  return rows;
}

PrivacyReport BuildPrivacyReport(const PrivacyParams& params,
                                 const QuantizerConfig& oracle_config,
                                 MechanismKind kind, int grid_points) {
  params.Validate();
  PrivacyReport report;
  report.params = params;
  if (kind == MechanismKind::kKLevel) {
    report.mechanism_mode = "k-level";
  } else {
    report.mechanism_mode =
        oracle_config.mode == QuantizerMode::kDpSafe ? "dp-safe" : "literal";
  }
  report.gamma = oracle_config.gamma;
  report.oracle_grid_points = grid_points;
  report.eps_pure_scalar = PureDpEpsilonScalar(params.levels, params.p);
  report.eps_pure_vector = PureDpEpsilonVector(params.levels, params.p,
                                               params.dimension, params.kappa);
  report.eps_rdp_scalar = RdpEpsilonScalar(params.levels, params.p,
                                           params.alpha);
  report.eps_rdp_vector = RdpEpsilonVector(params.levels, params.p,
                                           params.alpha, params.dimension,
                                           params.kappa);
  QuantizerConfig cfg = oracle_config;
  cfg.levels = params.levels;
  cfg.p = params.p;
  report.eps_oracle_scalar =
      PureDpEpsilonOracle(Quantizer(cfg), kind, grid_points);
  const RdpOracleResult oracle =
      RdpExtremalOracle(params.levels, params.p, params.alpha);
  report.rdp_oracle_scalar = oracle.renyi_exact;
  report.rdp_oracle_shifted = oracle.renyi_shifted;
  report.notes = {
      "eps_pure_vector composes the per-element bound linearly in kappa",
      "eps_rdp_scalar exceeds rdp_oracle_shifted by "
      "log(alpha*(1-p)^-(2*alpha-1))/(alpha-1); both columns are kept and "
      "neither is substituted for the other",
      "eps_oracle_scalar is the exact sup log-ratio of the configured "
      "mechanism on the evaluation grid",
  };
  return report;
}

}  // namespace qmgeo
