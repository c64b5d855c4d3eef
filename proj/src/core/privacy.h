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

#ifndef QMGEO_CORE_PRIVACY_H_
#define QMGEO_CORE_PRIVACY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "core/quantizer.h"

namespace qmgeo {

struct PrivacyParams {
  int levels = 8;          // R >= 2
  double p = 0.9;          // (0, 1) for the closed forms
  std::int64_t dimension = 1;
  double kappa = 1.0;      // subsampling rate, (0, 1]
  double alpha = 2.0;      // Renyi order, > 1
  void Validate() const;
};

// Closed-form pure-DP bound for one quantized element:
// -(ln p + (R-2) ln(1-p)).
double PureDpEpsilonScalar(int levels, double p);

// Vector bound: dimension * kappa * PureDpEpsilonScalar. The kappa factor
// enters linearly, as in the source bound; the report flags this.
double PureDpEpsilonVector(int levels, double p, std::int64_t dimension,
                           double kappa);

// Closed-form order-alpha RDP bound for one element. Evaluated in the log
// domain; terms of size (1-p)^(-(alpha-1)R) appear for large alpha*R.
double RdpEpsilonScalar(int levels, double p, double alpha);

// Subsampled vector bound kappa^2 * d * RdpEpsilonScalar(alpha). The
// amplification step is only stated for alpha <= 2; larger alpha is refused.
double RdpEpsilonVector(int levels, double p, double alpha,
                        std::int64_t dimension, double kappa);

enum class MechanismKind { kMixedGeometric, kKLevel };

// Exhaustive pure-DP oracle: the supremum over inputs w, w' on a uniform grid
// of [-w_max, w_max] (always augmented with every grid level) and over output
// levels v of |log Pr[Q(w)=v] - log Pr[Q(w')=v]|, from exact output masses.
// Returns +infinity when some level has zero mass for one input and positive
// mass for another. grid_points must be >= levels.
double PureDpEpsilonOracle(const Quantizer& quantizer, MechanismKind kind,
                           int grid_points);

// Per-level log-mass ranges behind PureDpEpsilonOracle; entry v is the
// epsilon contributed by output level v.
std::vector<double> PureDpEpsilonOraclePerLevel(const Quantizer& quantizer,
                                                MechanismKind kind,
                                                int grid_points);

struct RdpOracleResult {
  // Renyi divergence between the extremal pair: a truncated geometric on
  // {1..R} (normalizer 1-q^R) and its reversal, by direct summation.
  double renyi_exact;
  // The same sum evaluated with the truncation normalizer 1-q^(R-1) and a
  // one-step-shifted reversal exponent. The closed form RdpEpsilonScalar
  // tracks this variant up to a factor alpha*(1-p)^-(2*alpha-1) inside the
  // log; both values are reported so the gap stays visible.
  double renyi_shifted;
};
RdpOracleResult RdpExtremalOracle(int levels, double p, double alpha);

// Linear composition across rounds (pure DP, or RDP at fixed alpha).
double ComposeRounds(double per_round_eps, std::int64_t rounds);

// Standard RDP-to-approximate-DP conversion: eps + log(1/delta)/(alpha-1).
double RdpToDp(double eps_rdp, double alpha, double delta);

struct SweepRow {
  double x;
  double eps_closed_form;
  double eps_oracle;  // NaN when the sweep has no oracle column
};
std::vector<SweepRow> SweepEpsVsP(int levels, double from, double to,
                                  int count);
std::vector<SweepRow> SweepRdpVsAlpha(int levels, double p, double from,
                                      double to, int count);

struct PrivacyReport {
  PrivacyParams params;
  std::string mechanism_mode;  // "dp-safe", "literal", or "k-level"
  double gamma = 0.0;
  int oracle_grid_points = 0;
  double eps_pure_scalar = 0.0;
  double eps_pure_vector = 0.0;
  double eps_rdp_scalar = 0.0;
  double eps_rdp_vector = 0.0;
  double eps_oracle_scalar = 0.0;  // may be +infinity
  double rdp_oracle_scalar = 0.0;
  double rdp_oracle_shifted = 0.0;
  std::vector<std::string> notes;
};

// Assembles the full report: closed forms, the pure-DP oracle for the given
// mechanism, and both extremal RDP sums.
PrivacyReport BuildPrivacyReport(const PrivacyParams& params,
                                 const QuantizerConfig& oracle_config,
                                 MechanismKind kind, int grid_points);

}  // namespace qmgeo

#endif  // QMGEO_CORE_PRIVACY_H_
