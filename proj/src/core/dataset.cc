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

#include "core/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "core/errors.h"
#include "core/random.h"

namespace qmgeo {
namespace {

constexpr std::uint64_t kTagBlob = 0x64617461;   // per-sample feature noise
constexpr std::uint64_t kTagSplit = 0x73706c69;  // holdout/partition shuffle
constexpr std::uint64_t kTagPca = 0x70636131;    // power-iteration starts

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

double ParseNumber(const std::string& text, const std::string& path,
                   std::size_t line_number) {
  try {
    std::size_t consumed = 0;
    const double value = std::stod(text, &consumed);
    while (consumed < text.size() &&
           std::isspace(static_cast<unsigned char>(text[consumed]))) {
      ++consumed;
    }
    if (consumed != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw DataError(path + ":" + std::to_string(line_number) +
                    ": not a number: '" + text + "'");
  }
}

// Shuffles 0..n-1, carves off the holdout, deals the rest round-robin.
void AssignSplits(Dataset& dataset, int clients, double holdout_fraction,
                  RandomStream stream) {
  if (clients < 1) {
    throw std::invalid_argument("dataset: clients must be >= 1");
  }
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) {
    throw std::invalid_argument(
        "dataset: holdout_fraction must lie in [0, 1)");
  }
  const std::size_t n = dataset.features.rows;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[stream.NextBelow(i)]);
  }
  const std::size_t holdout_count =
      static_cast<std::size_t>(std::llround(holdout_fraction * n));
  dataset.holdout.assign(order.begin(), order.begin() + holdout_count);
  dataset.partition.assign(clients, {});
  for (std::size_t i = holdout_count; i < n; ++i) {
    dataset.partition[(i - holdout_count) % clients].push_back(order[i]);
  }
  for (const auto& part : dataset.partition) {
    if (part.empty()) {
      throw std::invalid_argument(
          "dataset: not enough samples to give every client data");
    }
  }
}

}  // namespace

std::size_t Dataset::TrainSampleCount() const {
  std::size_t total = 0;
  for (const auto& part : partition) total += part.size();
  return total;
}

std::size_t Dataset::MinPartitionSize() const {
  std::size_t smallest = std::numeric_limits<std::size_t>::max();
  for (const auto& part : partition) smallest = std::min(smallest, part.size());
  return smallest;
}

Dataset MakeSyntheticDataset(const SyntheticSpec& spec, int clients,
                             double holdout_fraction) {
  if (spec.samples < spec.classes) {
    throw std::invalid_argument("synthetic dataset: samples must be >= classes");
  }
  if (spec.classes < 2 || spec.input_dim < spec.classes) {
    throw std::invalid_argument(
        "synthetic dataset: need classes >= 2 and input_dim >= classes");
  }
  Dataset dataset;
  dataset.classes = spec.classes;
  dataset.features = Matrix(spec.samples, spec.input_dim);
  dataset.labels.resize(spec.samples);
  for (int i = 0; i < spec.samples; ++i) {
    const int label = i % spec.classes;
    dataset.labels[i] = label;
    RandomStream noise = RandomStream::ForKey(spec.seed, kTagBlob, i);
    double* row = dataset.features.Row(i);
    for (int j = 0; j < spec.input_dim; ++j) {
      row[j] = (j == label ? spec.separation : 0.0) + noise.NextGaussian();
    }
  }
  AssignSplits(dataset, clients, holdout_fraction,
               RandomStream::ForKey(spec.seed, kTagSplit));
  return dataset;
}

Dataset LoadCsvDataset(const std::string& path, const std::string& label_column,
                       int clients, double holdout_fraction,
                       std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) {
    throw DataError(path + ": cannot open file");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(path + ":1: missing header row");
  }
  const std::vector<std::string> header = SplitFields(line);
  std::size_t label_index = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == label_column) label_index = i;
  }
  if (label_index == header.size()) {
    throw DataError(path + ":1: no column named '" + label_column + "'");
  }
  if (header.size() < 2) {
    throw DataError(path + ":1: need at least one feature column");
  }

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::vector<std::string> fields = SplitFields(line);
    if (fields.size() != header.size()) {
      throw DataError(path + ":" + std::to_string(line_number) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const double v = ParseNumber(fields[i], path, line_number);
      if (i == label_index) {
        if (v != std::floor(v) || v < 0.0) {
          throw DataError(path + ":" + std::to_string(line_number) +
                          ": label must be a non-negative integer");
        }
        labels.push_back(static_cast<int>(v));
      } else {
        values.push_back(v);
      }
    }
  }
  if (labels.empty()) {
    throw DataError(path + ": no data rows");
  }

  Dataset dataset;
  dataset.features = Matrix(labels.size(), header.size() - 1);
  dataset.features.data = std::move(values);
  dataset.labels = std::move(labels);
  dataset.classes =
      *std::max_element(dataset.labels.begin(), dataset.labels.end()) + 1;
  AssignSplits(dataset, clients, holdout_fraction,
               RandomStream::ForKey(seed, kTagSplit));
  return dataset;
}

void SaveCsvDataset(const std::string& path, const Matrix& features,
                    std::span<const int> labels,
                    const std::string& label_column) {
  std::ofstream out(path);
  if (!out) {
    throw DataError(path + ": cannot open file for writing");
  }
  for (std::size_t j = 0; j < features.cols; ++j) {
    out << "f" << j << ",";
  }
  out << label_column << "\n";
  char buffer[64];
  for (std::size_t i = 0; i < features.rows; ++i) {
    for (std::size_t j = 0; j < features.cols; ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", features.At(i, j));
      out << buffer << ",";
    }
    out << labels[i] << "\n";
  }
}

PcaBasis ComputePcaBasis(const Matrix& features,
                         std::span<const std::size_t> rows, int k) {
  const int dim = static_cast<int>(features.cols);
  if (k < 1 || k > dim) {
    throw std::invalid_argument("pca: need 1 <= k <= input_dim");
  }
  if (rows.size() < 2) {
    throw std::invalid_argument("pca: need at least two rows to fit");
  }
  PcaBasis basis;
  basis.mean.assign(dim, 0.0);
  for (std::size_t row : rows) {
    const double* x = features.Row(row);
    for (int j = 0; j < dim; ++j) basis.mean[j] += x[j];
  }
  for (double& m : basis.mean) m /= static_cast<double>(rows.size());

  // Sample covariance of the fitted rows.
  Matrix cov(dim, dim);
  std::vector<double> centered(dim);
  for (std::size_t row : rows) {
    const double* x = features.Row(row);
    for (int j = 0; j < dim; ++j) centered[j] = x[j] - basis.mean[j];
    for (int a = 0; a < dim; ++a) {
      for (int b = a; b < dim; ++b) {
        cov.At(a, b) += centered[a] * centered[b];
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(rows.size() - 1);
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      cov.At(a, b) *= scale;
      cov.At(b, a) = cov.At(a, b);
    }
  }

  constexpr int kMaxIterations = 10000;
  constexpr double kTolerance = 1e-12;
  basis.components = Matrix(k, dim);
  basis.eigenvalues.assign(k, 0.0);
  std::vector<double> v(dim), next(dim);
  for (int component = 0; component < k; ++component) {
    RandomStream stream = RandomStream::ForKey(0, kTagPca, component);
    for (int j = 0; j < dim; ++j) v[j] = 2.0 * stream.NextUnit() - 1.0;
    double residual = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      // Apply the covariance with earlier components deflated away.
      for (int a = 0; a < dim; ++a) {
        double acc = 0.0;
        for (int b = 0; b < dim; ++b) acc += cov.At(a, b) * v[b];
        next[a] = acc;
      }
      for (int prev = 0; prev < component; ++prev) {
        const double* u = basis.components.Row(prev);
        double dot = 0.0;
        for (int j = 0; j < dim; ++j) dot += u[j] * next[j];
        for (int j = 0; j < dim; ++j) next[j] -= dot * u[j];
      }
      double norm = 0.0;
      for (double x : next) norm += x * x;
      norm = std::sqrt(norm);
      if (norm == 0.0) {
        // Deflated operator annihilates the start vector; restart it.
        for (int j = 0; j < dim; ++j) next[j] = 2.0 * stream.NextUnit() - 1.0;
        norm = 1.0;
      }
      double align = 0.0;
      for (int j = 0; j < dim; ++j) align += v[j] * next[j] / norm;
      const double sign = align >= 0.0 ? 1.0 : -1.0;
      residual = 0.0;
      for (int j = 0; j < dim; ++j) {
        const double updated = sign * next[j] / norm;
        residual = std::max(residual, std::abs(updated - v[j]));
        v[j] = updated;
      }
      if (residual < kTolerance) break;
    }
    if (!(residual < 1e-6)) {
      throw NumericError("pca: power iteration stalled at residual " +
                         std::to_string(residual) + " for component " +
                         std::to_string(component));
    }
    // Canonical sign: largest-magnitude entry positive.
    int peak = 0;
    for (int j = 1; j < dim; ++j) {
      if (std::abs(v[j]) > std::abs(v[peak])) peak = j;
    }
    if (v[peak] < 0.0) {
      for (double& x : v) x = -x;
    }
    double lambda = 0.0;
    for (int a = 0; a < dim; ++a) {
      double acc = 0.0;
      for (int b = 0; b < dim; ++b) acc += cov.At(a, b) * v[b];
      lambda += v[a] * acc;
    }
    basis.eigenvalues[component] = lambda;
    std::copy(v.begin(), v.end(), basis.components.Row(component));
    // Deflate for the next component.
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        cov.At(a, b) -= lambda * v[a] * v[b];
      }
    }
  }
  return basis;
}

std::vector<double> PcaProject(const PcaBasis& basis, const double* x) {
  const std::size_t k = basis.components.rows;
  const std::size_t dim = basis.components.cols;
  std::vector<double> projected(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    const double* u = basis.components.Row(c);
    double acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      acc += u[j] * (x[j] - basis.mean[j]);
    }
    projected[c] = acc;
  }
  return projected;
}

Dataset PcaReduce(const Dataset& dataset, int k) {
  std::vector<std::size_t> train_rows;
  for (const auto& part : dataset.partition) {
    train_rows.insert(train_rows.end(), part.begin(), part.end());
  }
  const PcaBasis basis = ComputePcaBasis(dataset.features, train_rows, k);
  Dataset reduced;
  reduced.labels = dataset.labels;
  reduced.classes = dataset.classes;
  reduced.partition = dataset.partition;
  reduced.holdout = dataset.holdout;
  reduced.features = Matrix(dataset.features.rows, k);
  for (std::size_t i = 0; i < dataset.features.rows; ++i) {
    const std::vector<double> projected =
        PcaProject(basis, dataset.features.Row(i));
    std::copy(projected.begin(), projected.end(), reduced.features.Row(i));
  }
  return reduced;
}

}  // namespace qmgeo
