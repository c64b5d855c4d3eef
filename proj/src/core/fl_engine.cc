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

#include "core/fl_engine.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "core/privacy.h"
#include "core/random.h"

namespace qmgeo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::uint64_t kTagInit = 0x696e6974;
constexpr std::uint64_t kTagBatch = 0x62617463;
constexpr std::uint64_t kTagQuant = 0x7175616e;

void RequireKeys(const nlohmann::json& json,
                 std::initializer_list<const char*> allowed,
                 const std::string& context) {
  if (!json.is_object()) {
    throw std::invalid_argument("config: '" + context + "' must be an object");
  }
  for (const auto& item : json.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("config: unknown key '" + context + "." +
                                  item.key() + "'");
    }
  }
}

template <typename T>
T Get(const nlohmann::json& json, const char* key, const std::string& context) {
  if (!json.contains(key)) {
    throw std::invalid_argument("config: missing key '" + context + "." + key +
                                "'");
  }
  try {
    return json.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("config: bad value for '" + context + "." +
                                key + "'");
  }
}

template <typename T>
T GetOr(const nlohmann::json& json, const char* key, const std::string& context,
        T fallback) {
  if (!json.contains(key)) return fallback;
  return Get<T>(json, key, context);
}

std::vector<std::size_t> SampleWithoutReplacement(
    const std::vector<std::size_t>& pool, int count, RandomStream stream) {
  std::vector<std::size_t> working = pool;
  for (int i = 0; i < count; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(stream.NextBelow(working.size() - i));
    std::swap(working[i], working[j]);
  }
  working.resize(count);
  return working;
}

}  // namespace

void FlConfig::Validate() const {
  if (clients < 1 || rounds < 1 || batch_size < 1) {
    throw std::invalid_argument(
        "FlConfig: clients, rounds and batch_size must be >= 1");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("FlConfig: learning_rate must be > 0");
  }
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("FlConfig: alpha must be > 1");
  }
  if (!(clip_threshold > 0.0)) {
    throw std::invalid_argument("FlConfig: clip_threshold must be > 0");
  }
  model.Validate();
  if (quantizer) quantizer->Validate();
}

QuantizerConfig QuantizerConfigFromJson(const nlohmann::json& json) {
  RequireKeys(json, {"R", "p", "w_max", "mode", "gamma"}, "quantizer");
  QuantizerConfig config;
  config.levels = Get<int>(json, "R", "quantizer");
  config.p = Get<double>(json, "p", "quantizer");
  config.w_max = Get<double>(json, "w_max", "quantizer");
  const std::string mode =
      GetOr<std::string>(json, "mode", "quantizer", "dp-safe");
  if (mode == "dp-safe") {
    config.mode = QuantizerMode::kDpSafe;
  } else if (mode == "literal") {
    config.mode = QuantizerMode::kLiteral;
  } else {
    throw std::invalid_argument(
        "config: quantizer.mode must be 'dp-safe' or 'literal'");
  }
  config.gamma = GetOr<double>(json, "gamma", "quantizer", 0.25);
  config.Validate();
  return config;
}

nlohmann::json QuantizerConfigToJson(const QuantizerConfig& config) {
  return {
      {"R", config.levels},
      {"p", config.p},
      {"w_max", config.w_max},
      {"mode", config.mode == QuantizerMode::kDpSafe ? "dp-safe" : "literal"},
      {"gamma", config.gamma},
  };
}

FlConfig FlConfigFromJson(const nlohmann::json& json) {
  RequireKeys(json,
              {"clients", "rounds", "batch_size", "learning_rate", "alpha",
               "clip_threshold", "master_seed", "weighted_aggregation",
               "model", "dataset", "quantizer"},
              "fl");
  FlConfig config;
  config.clients = Get<int>(json, "clients", "fl");
  config.rounds = Get<int>(json, "rounds", "fl");
  config.batch_size = Get<int>(json, "batch_size", "fl");
  config.learning_rate = Get<double>(json, "learning_rate", "fl");
  config.alpha = GetOr<double>(json, "alpha", "fl", 2.0);
  config.clip_threshold = GetOr<double>(json, "clip_threshold", "fl", 0.05);
  config.master_seed = GetOr<std::uint64_t>(json, "master_seed", "fl", 0);
  config.weighted_aggregation =
      GetOr<bool>(json, "weighted_aggregation", "fl", false);

  const nlohmann::json& model = json.at("model");
  RequireKeys(model, {"input_dim", "hidden_dim", "classes"}, "fl.model");
  config.model.input_dim = Get<int>(model, "input_dim", "fl.model");
  config.model.hidden_dim = Get<int>(model, "hidden_dim", "fl.model");
  config.model.classes = Get<int>(model, "classes", "fl.model");

  const nlohmann::json& dataset = json.at("dataset");
  const std::string kind = Get<std::string>(dataset, "kind", "fl.dataset");
  if (kind == "synthetic") {
    RequireKeys(dataset,
                {"kind", "samples", "separation", "seed", "holdout_fraction"},
                "fl.dataset");
    config.dataset.kind = DatasetKind::kSynthetic;
    config.dataset.samples = Get<int>(dataset, "samples", "fl.dataset");
    config.dataset.separation =
        GetOr<double>(dataset, "separation", "fl.dataset", 4.0);
    config.dataset.seed = GetOr<std::uint64_t>(dataset, "seed", "fl.dataset", 0);
  } else if (kind == "csv") {
    RequireKeys(dataset,
                {"kind", "path", "label_column", "pca_dim", "seed",
                 "holdout_fraction"},
                "fl.dataset");
    config.dataset.kind = DatasetKind::kCsv;
    config.dataset.path = Get<std::string>(dataset, "path", "fl.dataset");
    config.dataset.label_column =
        GetOr<std::string>(dataset, "label_column", "fl.dataset", "label");
    config.dataset.pca_dim = GetOr<int>(dataset, "pca_dim", "fl.dataset", 0);
    config.dataset.seed = GetOr<std::uint64_t>(dataset, "seed", "fl.dataset", 0);
  } else {
    throw std::invalid_argument(
        "config: fl.dataset.kind must be 'synthetic' or 'csv'");
  }
  config.dataset.holdout_fraction =
      GetOr<double>(dataset, "holdout_fraction", "fl.dataset", 0.1);

  if (json.contains("quantizer") && !json.at("quantizer").is_null()) {
    const nlohmann::json& quantizer = json.at("quantizer");
    if (quantizer.is_string()) {
      if (quantizer.get<std::string>() != "none") {
        throw std::invalid_argument(
            "config: fl.quantizer must be an object or the string 'none'");
      }
    } else {
      config.quantizer = QuantizerConfigFromJson(quantizer);
    }
  }
  config.Validate();
  return config;
}

nlohmann::json FlConfigToJson(const FlConfig& config) {
  nlohmann::json dataset;
  dataset["holdout_fraction"] = config.dataset.holdout_fraction;
  dataset["seed"] = config.dataset.seed;
  if (config.dataset.kind == DatasetKind::kSynthetic) {
    dataset["kind"] = "synthetic";
    dataset["samples"] = config.dataset.samples;
    dataset["separation"] = config.dataset.separation;
  } else {
    dataset["kind"] = "csv";
    dataset["path"] = config.dataset.path;
    dataset["label_column"] = config.dataset.label_column;
    dataset["pca_dim"] = config.dataset.pca_dim;
  }
  nlohmann::json json = {
      {"clients", config.clients},
      {"rounds", config.rounds},
      {"batch_size", config.batch_size},
      {"learning_rate", config.learning_rate},
      {"alpha", config.alpha},
      {"clip_threshold", config.clip_threshold},
      {"master_seed", config.master_seed},
      {"weighted_aggregation", config.weighted_aggregation},
      {"model",
       {{"input_dim", config.model.input_dim},
        {"hidden_dim", config.model.hidden_dim},
        {"classes", config.model.classes}}},
      {"dataset", dataset},
  };
  json["quantizer"] =
      config.quantizer ? QuantizerConfigToJson(*config.quantizer)
                       : nlohmann::json("none");
  return json;
}

ClientUpdateResult ComputeClientUpdate(const Mlp& model,
                                       std::span<const double> params,
                                       const Dataset& dataset, int client,
                                       const FlConfig& config, int round) {
  const std::vector<std::size_t>& pool = dataset.partition.at(client);
  if (static_cast<std::size_t>(config.batch_size) > pool.size()) {
    throw std::invalid_argument(
        "client update: batch_size exceeds the client's partition");
  }
  const std::vector<std::size_t> batch = SampleWithoutReplacement(
      pool, config.batch_size,
      RandomStream::ForKey(config.master_seed, kTagBatch, round, client));

  ClientUpdateResult result;
  result.kappa =
      static_cast<double>(config.batch_size) / static_cast<double>(pool.size());
  result.raw_clipped.resize(model.shape().ParameterCount());
  model.MeanLossAndGradient(params, dataset.features, dataset.labels, batch,
                            result.raw_clipped);
  ClipInPlace(result.raw_clipped, config.ClipBound());
  if (!config.quantizer) {
    result.quantized = result.raw_clipped;
    return result;
  }
  const Quantizer quantizer(*config.quantizer);
  const std::vector<QuantizedValue> quantized = quantizer.QuantizeVector(
      result.raw_clipped,
      RandomStream::ForKey(config.master_seed, kTagQuant, round, client));
  result.quantized.resize(quantized.size());
  for (std::size_t i = 0; i < quantized.size(); ++i) {
    result.quantized[i] = quantized[i].value;
  }
  return result;
}

std::vector<double> ServerAggregate(
    std::span<const double> params,
    const std::vector<std::vector<double>>& updates, double learning_rate) {
  std::vector<double> next(params.begin(), params.end());
  for (const std::vector<double>& update : updates) {
    if (update.size() != next.size()) {
      throw std::invalid_argument(
          "ServerAggregate: update dimension mismatch");
    }
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] -= learning_rate * update[i];
    }
  }
  return next;
}

double GlobalTrainLoss(const Mlp& model, std::span<const double> params,
                       const Dataset& dataset) {
  const double total = static_cast<double>(dataset.TrainSampleCount());
  double loss = 0.0;
  for (const auto& part : dataset.partition) {
    loss += (static_cast<double>(part.size()) / total) *
            model.MeanLoss(params, dataset.features, dataset.labels, part);
  }
  return loss;
}

double HoldoutAccuracy(const Mlp& model, std::span<const double> params,
                       const Dataset& dataset) {
  if (dataset.holdout.empty()) {
    throw std::invalid_argument("HoldoutAccuracy: holdout set is empty");
  }
  std::size_t correct = 0;
  for (std::size_t row : dataset.holdout) {
    if (model.Predict(params, dataset.features.Row(row)) ==
        dataset.labels[row]) {
      ++correct;
    }
  }
  return static_cast<double>(correct) /
         static_cast<double>(dataset.holdout.size());
}

RunResult RunTraining(const FlConfig& config) {
  config.Validate();
  Dataset dataset;
  if (config.dataset.kind == DatasetKind::kSynthetic) {
    dataset = MakeSyntheticDataset(
        {config.dataset.seed, config.dataset.samples, config.model.input_dim,
         config.model.classes, config.dataset.separation},
        config.clients, config.dataset.holdout_fraction);
  } else {
    dataset = LoadCsvDataset(config.dataset.path, config.dataset.label_column,
                             config.clients, config.dataset.holdout_fraction,
                             config.dataset.seed);
    if (config.dataset.pca_dim > 0) {
      dataset = PcaReduce(dataset, config.dataset.pca_dim);
    }
  }
  return RunTraining(config, dataset);
}

RunResult RunTraining(const FlConfig& config, const Dataset& dataset) {
  config.Validate();
  if (static_cast<int>(dataset.features.cols) != config.model.input_dim) {
    throw std::invalid_argument(
        "RunTraining: dataset feature dimension does not match model.input_dim");
  }
  if (dataset.classes > config.model.classes) {
    throw std::invalid_argument(
        "RunTraining: dataset has more classes than the model");
  }
  if (static_cast<int>(dataset.partition.size()) != config.clients) {
    throw std::invalid_argument(
        "RunTraining: dataset partition count does not match clients");
  }

  const Mlp model(config.model);
  std::vector<double> params =
      model.InitParams(RandomStream::ForKey(config.master_seed, kTagInit));
  const std::int64_t dimension = config.model.ParameterCount();

  RunResult result;
  result.config = config;
  result.summary.model_dimension = dimension;
  result.summary.kappa = static_cast<double>(config.batch_size) /
                         static_cast<double>(dataset.MinPartitionSize());
  // Per-round bounds are constant across rounds for a fixed mechanism; a run
  // without a quantizer (or with the degenerate p = 1) offers no finite bound.
  double eps_pure = kInf;
  double eps_rdp = kInf;
  if (config.quantizer && config.quantizer->p < 1.0) {
    eps_pure = PureDpEpsilonVector(config.quantizer->levels,
                                   config.quantizer->p, dimension,
                                   result.summary.kappa);
    eps_rdp = RdpEpsilonVector(config.quantizer->levels, config.quantizer->p,
                               config.alpha, dimension, result.summary.kappa);
  }
  result.summary.eps_round_pure = eps_pure;
  result.summary.eps_round_rdp = eps_rdp;
  result.summary.initial_loss = GlobalTrainLoss(model, params, dataset);

  const double total_samples = static_cast<double>(dataset.TrainSampleCount());
  std::vector<double> raw_aggregate(dimension);
  std::vector<double> quantized_aggregate(dimension);
  for (int round = 1; round <= config.rounds; ++round) {
    std::fill(raw_aggregate.begin(), raw_aggregate.end(), 0.0);
    std::fill(quantized_aggregate.begin(), quantized_aggregate.end(), 0.0);
    for (int client = 0; client < config.clients; ++client) {
      const ClientUpdateResult update =
          ComputeClientUpdate(model, params, dataset, client, config, round);
      const double weight =
          config.weighted_aggregation
              ? static_cast<double>(dataset.partition[client].size()) /
                    total_samples
              : 1.0;
      for (std::int64_t i = 0; i < dimension; ++i) {
        raw_aggregate[i] += weight * update.raw_clipped[i];
        quantized_aggregate[i] += weight * update.quantized[i];
      }
    }
    double delta_sq = 0.0;
    double grad_dot_delta = 0.0;
    for (std::int64_t i = 0; i < dimension; ++i) {
      const double delta = quantized_aggregate[i] - raw_aggregate[i];
      delta_sq += delta * delta;
      grad_dot_delta += raw_aggregate[i] * delta;
    }
    for (std::int64_t i = 0; i < dimension; ++i) {
      params[i] -= config.learning_rate * quantized_aggregate[i];
    }
    RoundMetrics metrics;
    metrics.round = round;
    metrics.train_loss = GlobalTrainLoss(model, params, dataset);
    metrics.holdout_accuracy = HoldoutAccuracy(model, params, dataset);
    metrics.delta_norm = std::sqrt(delta_sq);
    metrics.grad_dot_delta = grad_dot_delta;
    metrics.eps_round_pure = eps_pure;
    metrics.eps_round_rdp = eps_rdp;
    metrics.eps_cumulative = eps_rdp * round;
    result.rounds.push_back(metrics);
  }
  result.summary.final_train_loss = result.rounds.back().train_loss;
  result.summary.final_holdout_accuracy = result.rounds.back().holdout_accuracy;
  result.summary.eps_cumulative_pure = eps_pure * config.rounds;
  result.summary.eps_cumulative_rdp = eps_rdp * config.rounds;
  return result;
}

}  // namespace qmgeo
