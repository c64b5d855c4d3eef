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

// Command-line front end over the qmgeo shared library. Subcommands:
//   pmf       output-level distribution of the quantizer for one input
//   quantize  quantize a vector read from a single-column CSV
//   privacy   accountant report plus closed-form/oracle sweep tables
//   simulate  deterministic federated training run with telemetry
//   bound     optimality-gap trajectory for a recorded metrics table
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmgeo/qmgeo.h"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;
constexpr const char* kSchemaPrefix = "# qmgeo-csv v1 ";

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void Fail(int code, const std::string& message) {
  throw CliError{code, message};
}

int ExitCodeFor(qmgeo_status status) {
  switch (status) {
    case QMGEO_ERROR_INVALID_ARGUMENT:
      return kExitConfig;
    case QMGEO_ERROR_DATA:
      return kExitData;
    default:
      return kExitNumeric;
  }
}

void Check(qmgeo_status status) {
  if (status != QMGEO_OK) {
    Fail(ExitCodeFor(status), qmgeo_last_error());
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(kExitData, path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFileAtomic(const std::string& path, const std::string& content) {
  const std::string temp = path + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) Fail(kExitData, path + ": cannot open for writing");
    out << content;
    if (!out) Fail(kExitData, path + ": write failed");
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) Fail(kExitData, path + ": rename failed: " + ec.message());
}

std::string FormatValue(double value, int significant_digits) {
  if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", significant_digits, value);
  return buffer;
}

bool IsEpsColumn(const std::string& name) { return name.rfind("eps", 0) == 0; }

json ParseConfigFile(const std::string& path) {
  const std::string text = ReadFile(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    Fail(kExitConfig, path + ": invalid JSON: " + std::string(e.what()));
  }
}

void RequireKeys(const json& object, std::initializer_list<const char*> allowed,
                 const std::string& context) {
  if (!object.is_object()) {
    Fail(kExitConfig, "config: '" + context + "' must be an object");
  }
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) known = true;
    }
    if (!known) {
      Fail(kExitConfig,
           "config: unknown key '" + context + "." + item.key() + "'");
    }
  }
}

template <typename T>
T Get(const json& object, const char* key, const std::string& context) {
  if (!object.contains(key)) {
    Fail(kExitConfig, "config: missing key '" + context + "." + key + "'");
  }
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    Fail(kExitConfig, "config: bad value for '" + context + "." + key + "'");
  }
}

template <typename T>
T GetOr(const json& object, const char* key, const std::string& context,
        T fallback) {
  if (!object.contains(key)) return fallback;
  return Get<T>(object, key, context);
}

struct QuantizerHandle {
  qmgeo_quantizer* ptr = nullptr;
  double w_max = 0.0;
  QuantizerHandle() = default;
  QuantizerHandle(const QuantizerHandle&) = delete;
  QuantizerHandle& operator=(const QuantizerHandle&) = delete;
  QuantizerHandle(QuantizerHandle&& other) noexcept
      : ptr(other.ptr), w_max(other.w_max) {
    other.ptr = nullptr;
  }
  ~QuantizerHandle() { qmgeo_quantizer_destroy(ptr); }
};

QuantizerHandle OpenQuantizer(const json& block) {
  RequireKeys(block, {"R", "p", "w_max", "mode", "gamma"}, "quantizer");
  const int levels = Get<int>(block, "R", "quantizer");
  const double p = Get<double>(block, "p", "quantizer");
  const double w_max = Get<double>(block, "w_max", "quantizer");
  const std::string mode =
      GetOr<std::string>(block, "mode", "quantizer", "dp-safe");
  qmgeo_mode mode_value = QMGEO_MODE_DP_SAFE;
  if (mode == "literal") {
    mode_value = QMGEO_MODE_LITERAL;
  } else if (mode != "dp-safe") {
    Fail(kExitConfig, "config: quantizer.mode must be 'dp-safe' or 'literal'");
  }
  const double gamma = GetOr<double>(block, "gamma", "quantizer", 0.25);
  QuantizerHandle handle;
  handle.w_max = w_max;
  Check(qmgeo_quantizer_create(levels, p, w_max, mode_value, gamma,
                               &handle.ptr));
  return handle;
}

std::string OutPath(const std::string& out_dir, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) Fail(kExitData, out_dir + ": cannot create directory");
  return (std::filesystem::path(out_dir) / name).string();
}

std::string SerializeTable(const std::string& kind,
                           const std::vector<std::string>& columns,
                           const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  out << kSchemaPrefix << kind << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << row[i];
    }
    out << "\n";
  }
  return out.str();
}

// Renders a library table: "round"/"level_index" columns as integers, eps
// columns at 6 significant digits, everything else at 12.
std::string RenderTable(const std::string& kind, const qmgeo_table* table) {
  const std::size_t rows = qmgeo_table_rows(table);
  const std::size_t cols = qmgeo_table_cols(table);
  std::vector<std::string> columns(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    columns[c] = qmgeo_table_col_name(table, c);
  }
  std::vector<std::vector<std::string>> cells(rows,
                                              std::vector<std::string>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double value = 0.0;
      Check(qmgeo_table_cell(table, r, c, &value));
      if (columns[c] == "round" || columns[c] == "level_index") {
        cells[r][c] = std::to_string(static_cast<long long>(value));
      } else {
        cells[r][c] = FormatValue(value, IsEpsColumn(columns[c]) ? 6 : 12);
      }
    }
  }
  return SerializeTable(kind, columns, cells);
}

// ---- pmf -------------------------------------------------------------------

void RunPmf(const json& config, const std::string& out_dir) {
  RequireKeys(config, {"quantizer", "w"}, "pmf");
  if (!config.contains("quantizer")) {
    Fail(kExitConfig, "config: missing key 'pmf.quantizer'");
  }
  QuantizerHandle quantizer = OpenQuantizer(config.at("quantizer"));
  const double w = Get<double>(config, "w", "pmf");

  qmgeo_dist* dist = nullptr;
  Check(qmgeo_output_distribution(quantizer.ptr, w, &dist));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < qmgeo_dist_size(dist); ++i) {
    int64_t level = 0;
    double mass = 0.0;
    double value = 0.0;
    Check(qmgeo_dist_label(dist, i, &level));
    Check(qmgeo_dist_mass(dist, i, &mass));
    Check(qmgeo_bin_value(quantizer.ptr, static_cast<int32_t>(level), &value));
    rows.push_back({std::to_string(level), FormatValue(value, 12),
                    FormatValue(mass, 12)});
  }
  qmgeo_dist_destroy(dist);
  WriteFileAtomic(
      OutPath(out_dir, "pmf.csv"),
      SerializeTable("pmf", {"level_index", "bin_value", "mass"}, rows));
}

// ---- quantize ----------------------------------------------------------------

std::vector<double> ReadVectorFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(kExitData, path + ": cannot open file");
  std::vector<double> values;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') continue;
    try {
      std::size_t consumed = 0;
      const double value = std::stod(line, &consumed);
      while (consumed < line.size() &&
             std::isspace(static_cast<unsigned char>(line[consumed]))) {
        ++consumed;
      }
      if (consumed != line.size()) throw std::invalid_argument(line);
      values.push_back(value);
    } catch (const std::exception&) {
      Fail(kExitData, path + ":" + std::to_string(line_number) +
                          ": not a number: '" + line + "'");
    }
  }
  if (values.empty()) Fail(kExitData, path + ": no values");
  return values;
}

void RunQuantize(const json& config, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_override) {
  RequireKeys(config, {"quantizer", "input", "master_seed"}, "quantize");
  if (!config.contains("quantizer")) {
    Fail(kExitConfig, "config: missing key 'quantize.quantizer'");
  }
  QuantizerHandle quantizer = OpenQuantizer(config.at("quantizer"));
  const std::string input = Get<std::string>(config, "input", "quantize");
  std::uint64_t seed =
      GetOr<std::uint64_t>(config, "master_seed", "quantize", 0);
  if (seed_override) seed = *seed_override;

  std::vector<double> values = ReadVectorFile(input);
  Check(qmgeo_clip(values.data(), values.size(), quantizer.w_max));
  std::vector<int32_t> levels(values.size());
  std::vector<double> quantized(values.size());
  Check(qmgeo_quantize_vector(quantizer.ptr, values.data(), values.size(),
                              seed, levels.data(), quantized.data()));
  std::vector<std::vector<std::string>> rows;
  rows.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    rows.push_back({std::to_string(levels[i]), FormatValue(quantized[i], 12)});
  }
  WriteFileAtomic(OutPath(out_dir, "quantized.csv"),
                  SerializeTable("quantized", {"level_index", "value"}, rows));
}

// ---- privacy -----------------------------------------------------------------

struct SweepSpec {
  double from;
  double to;
  int count;
};

SweepSpec ReadSweep(const json& block, const std::string& key,
                    SweepSpec fallback) {
  if (!block.contains(key)) return fallback;
  const json& sweep = block.at(key);
  RequireKeys(sweep, {"from", "to", "count"}, "sweeps." + key);
  return {Get<double>(sweep, "from", "sweeps." + key),
          Get<double>(sweep, "to", "sweeps." + key),
          Get<int>(sweep, "count", "sweeps." + key)};
}

void RunPrivacy(const json& config, const std::string& out_dir) {
  RequireKeys(config, {"privacy", "sweeps"}, "privacy");
  if (!config.contains("privacy")) {
    Fail(kExitConfig, "config: missing key 'privacy.privacy'");
  }
  const json& block = config.at("privacy");
  char* report = nullptr;
  Check(qmgeo_privacy_report_json(block.dump().c_str(), &report));
  WriteFileAtomic(OutPath(out_dir, "privacy_report.json"),
                  std::string(report) + "\n");
  qmgeo_string_free(report);

  const int levels = Get<int>(block, "R", "privacy");
  const double p = Get<double>(block, "p", "privacy");
  const json sweeps = config.value("sweeps", json::object());
  RequireKeys(sweeps, {"p", "alpha"}, "sweeps");
  const SweepSpec p_sweep = ReadSweep(sweeps, "p", {0.5, 0.99, 50});
  const SweepSpec alpha_sweep = ReadSweep(sweeps, "alpha", {1.25, 10.0, 36});

  qmgeo_table* table = nullptr;
  Check(qmgeo_privacy_sweep_p(levels, p_sweep.from, p_sweep.to, p_sweep.count,
                              &table));
  WriteFileAtomic(OutPath(out_dir, "eps_vs_p.csv"),
                  RenderTable("eps_vs_p", table));
  qmgeo_table_destroy(table);

  table = nullptr;
  Check(qmgeo_privacy_sweep_alpha(levels, p, alpha_sweep.from, alpha_sweep.to,
                                  alpha_sweep.count, &table));
  WriteFileAtomic(OutPath(out_dir, "rdp_vs_alpha.csv"),
                  RenderTable("rdp_vs_alpha", table));
  qmgeo_table_destroy(table);
}

// ---- simulate ----------------------------------------------------------------

void RunSimulate(const json& config, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_override) {
  RequireKeys(config, {"fl"}, "simulate");
  if (!config.contains("fl")) {
    Fail(kExitConfig, "config: missing key 'simulate.fl'");
  }
  json fl = config.at("fl");
  if (seed_override) fl["master_seed"] = *seed_override;

  qmgeo_table* metrics = nullptr;
  char* summary = nullptr;
  Check(qmgeo_fl_run(fl.dump().c_str(), &metrics, &summary));
  WriteFileAtomic(OutPath(out_dir, "metrics.csv"),
                  RenderTable("metrics", metrics));
  WriteFileAtomic(OutPath(out_dir, "summary.json"),
                  std::string(summary) + "\n");
  qmgeo_table_destroy(metrics);
  qmgeo_string_free(summary);
}

// ---- bound -------------------------------------------------------------------

struct ParsedCsv {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

ParsedCsv ReadVersionedCsv(const std::string& path,
                           const std::string& expected_kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(kExitData, path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) Fail(kExitData, path + ": empty file");
  if (line != std::string(kSchemaPrefix) + expected_kind) {
    Fail(kExitData, path + ":1: expected schema line '" +
                        std::string(kSchemaPrefix) + expected_kind + "'");
  }
  ParsedCsv csv;
  if (!std::getline(in, line)) Fail(kExitData, path + ":2: missing header");
  std::istringstream header(line);
  std::string field;
  while (std::getline(header, field, ',')) csv.columns.push_back(field);
  std::size_t line_number = 2;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      row.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (row.size() != csv.columns.size()) {
      Fail(kExitData, path + ":" + std::to_string(line_number) +
                          ": expected " + std::to_string(csv.columns.size()) +
                          " fields, got " + std::to_string(row.size()));
    }
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

std::size_t ColumnIndex(const ParsedCsv& csv, const std::string& name,
                        const std::string& path) {
  for (std::size_t i = 0; i < csv.columns.size(); ++i) {
    if (csv.columns[i] == name) return i;
  }
  Fail(kExitData, path + ": missing column '" + name + "'");
}

double ParseCell(const ParsedCsv& csv, std::size_t row, std::size_t col,
                 const std::string& path) {
  const std::string& text = csv.rows[row][col];
  try {
    std::size_t consumed = 0;
    const double value = std::stod(text, &consumed);
    if (consumed != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    Fail(kExitData, path + ": row " + std::to_string(row + 1) +
                        ": not a number: '" + text + "'");
  }
}

void RunBound(const json& config, const std::string& out_dir) {
  RequireKeys(config, {"bound"}, "bound");
  if (!config.contains("bound")) {
    Fail(kExitConfig, "config: missing key 'bound.bound'");
  }
  const json& block = config.at("bound");
  RequireKeys(block, {"metrics", "L", "mu", "eta", "f_star", "f0"}, "bound");
  const std::string metrics_path = Get<std::string>(block, "metrics", "bound");
  const double smoothness = Get<double>(block, "L", "bound");
  const double pl_constant = Get<double>(block, "mu", "bound");
  const double step_size = Get<double>(block, "eta", "bound");
  const double f_star = Get<double>(block, "f_star", "bound");
  const double f0 = Get<double>(block, "f0", "bound");

  const ParsedCsv csv = ReadVersionedCsv(metrics_path, "metrics");
  const std::size_t round_col = ColumnIndex(csv, "round", metrics_path);
  const std::size_t loss_col = ColumnIndex(csv, "train_loss", metrics_path);
  const std::size_t delta_col = ColumnIndex(csv, "delta_norm", metrics_path);
  const std::size_t dot_col = ColumnIndex(csv, "grad_dot_delta", metrics_path);

  const std::size_t rounds = csv.rows.size();
  std::vector<double> loss(rounds), delta_sq(rounds), grad_dot(rounds);
  std::vector<std::string> round_labels(rounds);
  for (std::size_t t = 0; t < rounds; ++t) {
    round_labels[t] = csv.rows[t][round_col];
    loss[t] = ParseCell(csv, t, loss_col, metrics_path);
    const double delta_norm = ParseCell(csv, t, delta_col, metrics_path);
    delta_sq[t] = delta_norm * delta_norm;
    grad_dot[t] = ParseCell(csv, t, dot_col, metrics_path);
  }

  std::vector<double> bound(rounds);
  std::vector<uint8_t> holds(rounds);
  int32_t no_contraction = 0;
  Check(qmgeo_gap_bound(smoothness, pl_constant, step_size, f0 - f_star,
                        delta_sq.data(), grad_dot.data(), rounds, bound.data(),
                        &no_contraction));
  Check(qmgeo_descent_check(smoothness, pl_constant, step_size, f_star, f0,
                            loss.data(), delta_sq.data(), grad_dot.data(),
                            rounds, holds.data()));
  if (no_contraction != 0) {
    std::cerr << "warning: contraction factor outside (0, 1); the gap "
                 "recursion does not shrink\n";
  }
  std::vector<std::vector<std::string>> rows;
  rows.reserve(rounds);
  for (std::size_t t = 0; t < rounds; ++t) {
    rows.push_back({round_labels[t], FormatValue(loss[t] - f_star, 12),
                    FormatValue(bound[t], 12), holds[t] ? "1" : "0"});
  }
  WriteFileAtomic(
      OutPath(out_dir, "bound.csv"),
      SerializeTable("bound",
                     {"round", "empirical_gap", "bound_g", "inequality_holds"},
                     rows));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QMGeo randomized quantization toolkit"};
  app.require_subcommand(1);

  struct SubArgs {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
  };
  std::map<std::string, SubArgs> args;
  for (const char* name : {"pmf", "quantize", "privacy", "simulate", "bound"}) {
    CLI::App* sub = app.add_subcommand(name);
    SubArgs& sub_args = args[name];
    sub->add_option("--config", sub_args.config, "JSON config file")
        ->required();
    sub->add_option("--out", sub_args.out, "output directory");
    sub->add_option("--seed", sub_args.seed,
                    "override the config's master seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    const SubArgs& sub_args = args[name];
    const json config = ParseConfigFile(sub_args.config);
    if (name == "pmf") {
      RunPmf(config, sub_args.out);
    } else if (name == "quantize") {
      RunQuantize(config, sub_args.out, sub_args.seed);
    } else if (name == "privacy") {
      RunPrivacy(config, sub_args.out);
    } else if (name == "simulate") {
      RunSimulate(config, sub_args.out, sub_args.seed);
    } else {
      RunBound(config, sub_args.out);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
