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

#ifndef QMGEO_CORE_FL_ENGINE_H_
#define QMGEO_CORE_FL_ENGINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/dataset.h"
#include "core/mlp.h"
#include "core/quantizer.h"

namespace qmgeo {

enum class DatasetKind { kSynthetic, kCsv };

struct DatasetSpec {
  DatasetKind kind = DatasetKind::kSynthetic;
  std::uint64_t seed = 0;
  double holdout_fraction = 0.1;
  // synthetic
  int samples = 0;
  double separation = 4.0;
  // csv
  std::string path;
  std::string label_column = "label";
  int pca_dim = 0;  // 0 keeps the original feature dimension
};

struct FlConfig {
  int clients = 5;
  int rounds = 1;
  int batch_size = 64;
  double learning_rate = 0.04;
  double alpha = 2.0;           // Renyi order used for the reported bounds
  double clip_threshold = 0.05;  // used when no quantizer is configured
  std::uint64_t master_seed = 0;
  bool weighted_aggregation = false;  // scale client updates by |B_n|/B
  MlpShape model{100, 32, 10};
  DatasetSpec dataset;
  std::optional<QuantizerConfig> quantizer;

  double ClipBound() const {
    return quantizer ? quantizer->w_max : clip_threshold;
  }
  void Validate() const;
};

// Strict parsers: unknown keys are rejected with their path.
FlConfig FlConfigFromJson(const nlohmann::json& json);
nlohmann::json FlConfigToJson(const FlConfig& config);
QuantizerConfig QuantizerConfigFromJson(const nlohmann::json& json);
nlohmann::json QuantizerConfigToJson(const QuantizerConfig& config);

struct RoundMetrics {
  int round;
  double train_loss;
  double holdout_accuracy;
  double delta_norm;       // aggregate quantized minus aggregate clipped
  double grad_dot_delta;   // raw aggregate dotted with that difference
  double eps_round_pure;
  double eps_round_rdp;
  double eps_cumulative;   // linear composition of eps_round_rdp
};

struct RunSummary {
  std::int64_t model_dimension = 0;
  double kappa = 0.0;  // batch_size over the smallest partition
  double initial_loss = 0.0;
  double final_train_loss = 0.0;
  double final_holdout_accuracy = 0.0;
  double eps_round_pure = 0.0;
  double eps_round_rdp = 0.0;
  double eps_cumulative_pure = 0.0;
  double eps_cumulative_rdp = 0.0;
};

struct RunResult {
  std::vector<RoundMetrics> rounds;
  RunSummary summary;
  FlConfig config;
};

struct ClientUpdateResult {
  std::vector<double> quantized;    // what the client transmits
  std::vector<double> raw_clipped;  // clipped gradient before quantization
  double kappa;                     // batch_size / partition size
};

// One client's round: uniform mini-batch without replacement, mean gradient,
// element-wise clip, then quantization (or pass-through without a quantizer).
ClientUpdateResult ComputeClientUpdate(const Mlp& model,
                                       std::span<const double> params,
                                       const Dataset& dataset, int client,
                                       const FlConfig& config, int round);

// w <- w - learning_rate * sum of updates (plain unweighted sum).
std::vector<double> ServerAggregate(
    std::span<const double> params,
    const std::vector<std::vector<double>>& updates, double learning_rate);

// Weighted global training loss over the client partitions.
double GlobalTrainLoss(const Mlp& model, std::span<const double> params,
                       const Dataset& dataset);

double HoldoutAccuracy(const Mlp& model, std::span<const double> params,
                       const Dataset& dataset);

// Full deterministic run; every random draw derives from
// (master_seed, purpose, round, client, element).
RunResult RunTraining(const FlConfig& config);
RunResult RunTraining(const FlConfig& config, const Dataset& dataset);

}  // namespace qmgeo

#endif  // QMGEO_CORE_FL_ENGINE_H_
