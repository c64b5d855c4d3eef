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

#include "qmgeo/qmgeo.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/convergence.h"
#include "core/errors.h"
#include "core/fl_engine.h"
#include "core/privacy.h"
#include "core/quantizer.h"

struct qmgeo_quantizer {
  qmgeo::Quantizer impl;
};

struct qmgeo_dist {
  qmgeo::DiscreteDistribution impl;
};

struct qmgeo_table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
qmgeo_status Guard(Fn&& fn) {
  try {
    fn();
    return QMGEO_OK;
  } catch (const qmgeo::DataError& e) {
    g_last_error = e.what();
    return QMGEO_ERROR_DATA;
  } catch (const qmgeo::NumericError& e) {
    g_last_error = e.what();
    return QMGEO_ERROR_NUMERIC;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return QMGEO_ERROR_INVALID_ARGUMENT;
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return QMGEO_ERROR_INVALID_ARGUMENT;
  } catch (const std::out_of_range& e) {
    g_last_error = e.what();
    return QMGEO_ERROR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QMGEO_ERROR_INTERNAL;
  }
}

qmgeo_status RequirePointer(const void* p, const char* what) {
  if (p != nullptr) return QMGEO_OK;
  g_last_error = std::string(what) + " must not be null";
  return QMGEO_ERROR_INVALID_ARGUMENT;
}

char* CopyString(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Epsilon values carry 6 significant digits; unbounded loss serializes as
// the literal "+inf" so downstream parsers can compare losslessly.
std::string FormatEps(double value) {
  if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

qmgeo::QuantizerConfig OracleConfigFromJson(const nlohmann::json& json,
                                            qmgeo::MechanismKind* kind) {
  qmgeo::QuantizerConfig config;
  config.levels = 2;  // overwritten by the report builder
  config.p = 0.5;
  config.w_max = json.value("w_max", 1.0);
  config.gamma = json.value("gamma", 0.25);
  const std::string mode = json.value("mode", "dp-safe");
  if (mode == "dp-safe") {
    config.mode = qmgeo::QuantizerMode::kDpSafe;
  } else if (mode == "literal") {
    config.mode = qmgeo::QuantizerMode::kLiteral;
  } else {
    throw std::invalid_argument("oracle.mode must be 'dp-safe' or 'literal'");
  }
  const std::string mechanism = json.value("mechanism", "mgeo");
  if (mechanism == "mgeo") {
    *kind = qmgeo::MechanismKind::kMixedGeometric;
  } else if (mechanism == "k-level") {
    *kind = qmgeo::MechanismKind::kKLevel;
  } else {
    throw std::invalid_argument(
        "oracle.mechanism must be 'mgeo' or 'k-level'");
  }
  return config;
}

}  // namespace

extern "C" {

const char* qmgeo_version(void) { return "1.0.0"; }

const char* qmgeo_last_error(void) { return g_last_error.c_str(); }

void qmgeo_string_free(char* s) { delete[] s; }

qmgeo_status qmgeo_quantizer_create(int32_t levels, double p, double w_max,
                                    qmgeo_mode mode, double gamma,
                                    qmgeo_quantizer** out) {
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  return Guard([&] {
    qmgeo::QuantizerConfig config;
    config.levels = levels;
    config.p = p;
    config.w_max = w_max;
    config.mode = mode == QMGEO_MODE_DP_SAFE ? qmgeo::QuantizerMode::kDpSafe
                                             : qmgeo::QuantizerMode::kLiteral;
    config.gamma = gamma;
    *out = new qmgeo_quantizer{qmgeo::Quantizer(config)};
  });
}

void qmgeo_quantizer_destroy(qmgeo_quantizer* quantizer) { delete quantizer; }

qmgeo_status qmgeo_bin_value(const qmgeo_quantizer* quantizer, int32_t level,
                             double* out) {
  if (qmgeo_status s = RequirePointer(quantizer, "quantizer")) return s;
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  return Guard([&] { *out = quantizer->impl.BinValue(level); });
}

qmgeo_status qmgeo_output_distribution(const qmgeo_quantizer* quantizer,
                                       double w, qmgeo_dist** out) {
  if (qmgeo_status s = RequirePointer(quantizer, "quantizer")) return s;
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  return Guard(
      [&] { *out = new qmgeo_dist{quantizer->impl.OutputDistribution(w)}; });
}

qmgeo_status qmgeo_klevel_distribution(const qmgeo_quantizer* quantizer,
                                       double w, qmgeo_dist** out) {
  if (qmgeo_status s = RequirePointer(quantizer, "quantizer")) return s;
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  return Guard(
      [&] { *out = new qmgeo_dist{quantizer->impl.KLevelDistribution(w)}; });
}

qmgeo_status qmgeo_clip(double* values, size_t count, double w_max) {
  if (count > 0) {
    if (qmgeo_status s = RequirePointer(values, "values")) return s;
  }
  return Guard([&] { qmgeo::ClipInPlace({values, count}, w_max); });
}

qmgeo_status qmgeo_quantize_vector(const qmgeo_quantizer* quantizer,
                                   const double* values, size_t count,
                                   uint64_t seed, int32_t* levels_out,
                                   double* values_out) {
  if (qmgeo_status s = RequirePointer(quantizer, "quantizer")) return s;
  if (count > 0) {
    if (qmgeo_status s = RequirePointer(values, "values")) return s;
  }
  return Guard([&] {
    const std::vector<qmgeo::QuantizedValue> quantized =
        quantizer->impl.QuantizeVector({values, count},
                                       qmgeo::RandomStream(seed));
    for (size_t i = 0; i < quantized.size(); ++i) {
      if (levels_out != nullptr) levels_out[i] = quantized[i].level;
      if (values_out != nullptr) values_out[i] = quantized[i].value;
    }
  });
}

size_t qmgeo_dist_size(const qmgeo_dist* dist) {
  return dist == nullptr ? 0 : dist->impl.size();
}

qmgeo_status qmgeo_dist_label(const qmgeo_dist* dist, size_t index,
                              int64_t* out) {
  if (qmgeo_status s = RequirePointer(dist, "dist")) return s;
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  if (index >= dist->impl.size()) {
    g_last_error = "distribution index out of range";
    return QMGEO_ERROR_INVALID_ARGUMENT;
  }
  *out = dist->impl.support()[index];
  return QMGEO_OK;
}

qmgeo_status qmgeo_dist_mass(const qmgeo_dist* dist, size_t index,
                             double* out) {
  if (qmgeo_status s = RequirePointer(dist, "dist")) return s;
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  if (index >= dist->impl.size()) {
    g_last_error = "distribution index out of range";
    return QMGEO_ERROR_INVALID_ARGUMENT;
  }
  *out = dist->impl.masses()[index];
  return QMGEO_OK;
}

void qmgeo_dist_destroy(qmgeo_dist* dist) { delete dist; }

qmgeo_status qmgeo_eps_pure_scalar(int32_t levels, double p, double* out) {
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  return Guard([&] { *out = qmgeo::PureDpEpsilonScalar(levels, p); });
}

qmgeo_status qmgeo_eps_pure_vector(int32_t levels, double p, int64_t dimension,
                                   double kappa, double* out) {
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  return Guard(
      [&] { *out = qmgeo::PureDpEpsilonVector(levels, p, dimension, kappa); });
}

qmgeo_status qmgeo_eps_rdp_scalar(int32_t levels, double p, double alpha,
                                  double* out) {
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  return Guard([&] { *out = qmgeo::RdpEpsilonScalar(levels, p, alpha); });
}

qmgeo_status qmgeo_eps_rdp_vector(int32_t levels, double p, double alpha,
                                  int64_t dimension, double kappa,
                                  double* out) {
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  return Guard([&] {
    *out = qmgeo::RdpEpsilonVector(levels, p, alpha, dimension, kappa);
  });
}

qmgeo_status qmgeo_eps_oracle(const qmgeo_quantizer* quantizer,
                              qmgeo_mechanism mechanism, int32_t grid_points,
                              double* out) {
  if (qmgeo_status s = RequirePointer(quantizer, "quantizer")) return s;
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  return Guard([&] {
    const qmgeo::MechanismKind kind = mechanism == QMGEO_MECHANISM_KLEVEL
                                          ? qmgeo::MechanismKind::kKLevel
                                          : qmgeo::MechanismKind::kMixedGeometric;
    *out = qmgeo::PureDpEpsilonOracle(quantizer->impl, kind, grid_points);
  });
}

qmgeo_status qmgeo_rdp_extremal_oracle(int32_t levels, double p, double alpha,
                                       double* renyi_exact,
                                       double* renyi_shifted) {
  return Guard([&] {
    const qmgeo::RdpOracleResult result =
        qmgeo::RdpExtremalOracle(levels, p, alpha);
    if (renyi_exact != nullptr) *renyi_exact = result.renyi_exact;
    if (renyi_shifted != nullptr) *renyi_shifted = result.renyi_shifted;
  });
}

qmgeo_status qmgeo_compose_rounds(double per_round_eps, int64_t rounds,
                                  double* out) {
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  return Guard([&] { *out = qmgeo::ComposeRounds(per_round_eps, rounds); });
}

qmgeo_status qmgeo_rdp_to_dp(double eps_rdp, double alpha, double delta,
                             double* out) {
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  return Guard([&] { *out = qmgeo::RdpToDp(eps_rdp, alpha, delta); });
}

qmgeo_status qmgeo_privacy_report_json(const char* params_json,
                                       char** out_json) {
  if (qmgeo_status s = RequirePointer(params_json, "params_json")) return s;
  if (qmgeo_status s = RequirePointer(out_json, "out_json")) return s;
  return Guard([&] {
    const nlohmann::json json = nlohmann::json::parse(params_json);
    for (const auto& item : json.items()) {
      static const char* kAllowed[] = {"R", "p",     "d",     "kappa",
                                       "alpha", "delta", "oracle"};
      bool known = false;
      for (const char* key : kAllowed) {
        if (item.key() == key) known = true;
      }
      if (!known) {
        throw std::invalid_argument("config: unknown key 'privacy." +
                                    item.key() + "'");
      }
    }
    qmgeo::PrivacyParams params;
    params.levels = json.at("R").get<int>();
    params.p = json.at("p").get<double>();
    params.dimension = json.value("d", static_cast<std::int64_t>(1));
    params.kappa = json.value("kappa", 1.0);
    params.alpha = json.value("alpha", 2.0);

    qmgeo::MechanismKind kind = qmgeo::MechanismKind::kMixedGeometric;
    nlohmann::json oracle = json.value("oracle", nlohmann::json::object());
    for (const auto& item : oracle.items()) {
      static const char* kAllowed[] = {"w_max", "mode", "gamma", "grid_points",
                                       "mechanism"};
      bool known = false;
      for (const char* key : kAllowed) {
        if (item.key() == key) known = true;
      }
      if (!known) {
        throw std::invalid_argument("config: unknown key 'privacy.oracle." +
                                    item.key() + "'");
      }
    }
    const qmgeo::QuantizerConfig oracle_config =
        OracleConfigFromJson(oracle, &kind);
    const int grid_points = oracle.value("grid_points", 512);

    const qmgeo::PrivacyReport report =
        qmgeo::BuildPrivacyReport(params, oracle_config, kind, grid_points);

    nlohmann::json out;
    out["params"] = {{"R", report.params.levels},
                     {"p", report.params.p},
                     {"d", report.params.dimension},
                     {"kappa", report.params.kappa},
                     {"alpha", report.params.alpha}};
    out["mechanism_mode"] = report.mechanism_mode;
    out["gamma"] = report.gamma;
    out["oracle_grid_points"] = report.oracle_grid_points;
    out["eps_pure_scalar"] = FormatEps(report.eps_pure_scalar);
    out["eps_pure_vector"] = FormatEps(report.eps_pure_vector);
    out["eps_rdp_scalar"] = FormatEps(report.eps_rdp_scalar);
    out["eps_rdp_vector"] = FormatEps(report.eps_rdp_vector);
    out["eps_oracle_scalar"] = FormatEps(report.eps_oracle_scalar);
    out["rdp_oracle_scalar"] = FormatEps(report.rdp_oracle_scalar);
    out["rdp_oracle_shifted"] = FormatEps(report.rdp_oracle_shifted);
    if (json.contains("delta")) {
      const double delta = json.at("delta").get<double>();
      out["delta"] = delta;
      out["eps_dp_at_delta"] = FormatEps(
          qmgeo::RdpToDp(report.eps_rdp_vector, report.params.alpha, delta));
    }
    out["notes"] = report.notes;
    *out_json = CopyString(out.dump(2));
  });
}

qmgeo_status qmgeo_privacy_sweep_p(int32_t levels, double from, double to,
                                   int32_t count, qmgeo_table** out) {
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  return Guard([&] {
    auto table = std::make_unique<qmgeo_table>();
    table->columns = {"p", "eps_closed_form"};
    for (const qmgeo::SweepRow& row :
         qmgeo::SweepEpsVsP(levels, from, to, count)) {
      table->rows.push_back({row.x, row.eps_closed_form});
    }
    *out = table.release();
  });
}

qmgeo_status qmgeo_privacy_sweep_alpha(int32_t levels, double p, double from,
                                       double to, int32_t count,
                                       qmgeo_table** out) {
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  return Guard([&] {
    auto table = std::make_unique<qmgeo_table>();
    table->columns = {"alpha", "eps_closed_form", "eps_oracle"};
    for (const qmgeo::SweepRow& row :
         qmgeo::SweepRdpVsAlpha(levels, p, from, to, count)) {
      table->rows.push_back({row.x, row.eps_closed_form, row.eps_oracle});
    }
    *out = table.release();
  });
}

size_t qmgeo_table_rows(const qmgeo_table* table) {
  return table == nullptr ? 0 : table->rows.size();
}

size_t qmgeo_table_cols(const qmgeo_table* table) {
  return table == nullptr ? 0 : table->columns.size();
}

const char* qmgeo_table_col_name(const qmgeo_table* table, size_t col) {
  if (table == nullptr || col >= table->columns.size()) return nullptr;
  return table->columns[col].c_str();
}

qmgeo_status qmgeo_table_cell(const qmgeo_table* table, size_t row, size_t col,
                              double* out) {
  if (qmgeo_status s = RequirePointer(table, "table")) return s;
  if (qmgeo_status s = RequirePointer(out, "out")) return s;
  if (row >= table->rows.size() || col >= table->columns.size()) {
    g_last_error = "table index out of range";
    return QMGEO_ERROR_INVALID_ARGUMENT;
  }
  *out = table->rows[row][col];
  return QMGEO_OK;
}

void qmgeo_table_destroy(qmgeo_table* table) { delete table; }

qmgeo_status qmgeo_fl_run(const char* config_json, qmgeo_table** metrics,
                          char** summary_json) {
  if (qmgeo_status s = RequirePointer(config_json, "config_json")) return s;
  return Guard([&] {
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("config: invalid JSON: ") +
                                  e.what());
    }
    const qmgeo::FlConfig config = qmgeo::FlConfigFromJson(parsed);
    const qmgeo::RunResult result = qmgeo::RunTraining(config);
    if (metrics != nullptr) {
      auto table = std::make_unique<qmgeo_table>();
      table->columns = {"round",          "train_loss",
                        "holdout_accuracy", "delta_norm",
                        "grad_dot_delta", "eps_round_pure",
                        "eps_round_rdp",  "eps_cumulative"};
      for (const qmgeo::RoundMetrics& m : result.rounds) {
        table->rows.push_back({static_cast<double>(m.round), m.train_loss,
                               m.holdout_accuracy, m.delta_norm,
                               m.grad_dot_delta, m.eps_round_pure,
                               m.eps_round_rdp, m.eps_cumulative});
      }
      *metrics = table.release();
    }
    if (summary_json != nullptr) {
      nlohmann::json summary;
      summary["config"] = qmgeo::FlConfigToJson(result.config);
      summary["model_dimension"] = result.summary.model_dimension;
      summary["kappa"] = result.summary.kappa;
      summary["rounds"] = static_cast<int>(result.rounds.size());
      summary["initial_loss"] = result.summary.initial_loss;
      summary["final_train_loss"] = result.summary.final_train_loss;
      summary["final_holdout_accuracy"] =
          result.summary.final_holdout_accuracy;
      summary["eps_round_pure"] = FormatEps(result.summary.eps_round_pure);
      summary["eps_round_rdp"] = FormatEps(result.summary.eps_round_rdp);
      summary["eps_cumulative_pure"] =
          FormatEps(result.summary.eps_cumulative_pure);
      summary["eps_cumulative_rdp"] =
          FormatEps(result.summary.eps_cumulative_rdp);
      *summary_json = CopyString(summary.dump(2));
    }
  });
}

qmgeo_status qmgeo_gap_bound(double smoothness, double pl_constant,
                             double step_size, double initial_gap,
                             const double* delta_norm_sq,
                             const double* grad_dot_delta, size_t rounds,
                             double* bound_out, int32_t* no_contraction_flag) {
  if (rounds > 0) {
    if (qmgeo_status s = RequirePointer(delta_norm_sq, "delta_norm_sq"))
      return s;
    if (qmgeo_status s = RequirePointer(grad_dot_delta, "grad_dot_delta"))
      return s;
    if (qmgeo_status s = RequirePointer(bound_out, "bound_out")) return s;
  }
  return Guard([&] {
    const qmgeo::BoundParams params{smoothness, pl_constant, step_size,
                                    initial_gap};
    const qmgeo::GapBoundResult result = qmgeo::GapBound(
        params, {delta_norm_sq, rounds}, {grad_dot_delta, rounds});
    for (size_t i = 0; i < rounds; ++i) bound_out[i] = result.bound[i];
    if (no_contraction_flag != nullptr) {
      *no_contraction_flag = result.no_contraction ? 1 : 0;
    }
  });
}

qmgeo_status qmgeo_descent_check(double smoothness, double pl_constant,
                                 double step_size, double f_star, double f0,
                                 const double* loss,
                                 const double* delta_norm_sq,
                                 const double* grad_dot_delta, size_t rounds,
                                 uint8_t* holds_out) {
  if (rounds > 0) {
    if (qmgeo_status s = RequirePointer(loss, "loss")) return s;
    if (qmgeo_status s = RequirePointer(delta_norm_sq, "delta_norm_sq"))
      return s;
    if (qmgeo_status s = RequirePointer(grad_dot_delta, "grad_dot_delta"))
      return s;
    if (qmgeo_status s = RequirePointer(holds_out, "holds_out")) return s;
  }
  return Guard([&] {
    const qmgeo::BoundParams params{smoothness, pl_constant, step_size, 0.0};
    const std::vector<bool> holds = qmgeo::VerifyDescentInequality(
        params, f_star, f0, {loss, rounds}, {delta_norm_sq, rounds},
        {grad_dot_delta, rounds});
    for (size_t i = 0; i < rounds; ++i) holds_out[i] = holds[i] ? 1 : 0;
  });
}

}  // extern "C"
