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

#include "core/mlp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmgeo {
namespace {

// Numerically stable log(sum(exp(logits))).
double LogSumExp(const std::vector<double>& logits) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - peak);
  return peak + std::log(sum);
}

}  // namespace

void MlpShape::Validate() const {
  if (input_dim < 1 || hidden_dim < 1 || classes < 2) {
    throw std::invalid_argument(
        "MlpShape: need input_dim >= 1, hidden_dim >= 1, classes >= 2");
  }
}

Mlp::Mlp(MlpShape shape) : shape_(shape) { shape_.Validate(); }

std::vector<double> Mlp::InitParams(RandomStream stream) const {
  const int in = shape_.input_dim;
  const int hid = shape_.hidden_dim;
  const int cls = shape_.classes;
  std::vector<double> params(shape_.ParameterCount(), 0.0);
  const double scale1 = 1.0 / std::sqrt(static_cast<double>(in));
  for (int i = 0; i < in * hid; ++i) {
    params[i] = (2.0 * stream.NextUnit() - 1.0) * scale1;
  }
  const double scale2 = 1.0 / std::sqrt(static_cast<double>(hid));
  const int w2_offset = in * hid + hid;
  for (int i = 0; i < hid * cls; ++i) {
    params[w2_offset + i] = (2.0 * stream.NextUnit() - 1.0) * scale2;
  }
  return params;
}

void Mlp::Forward(std::span<const double> params, const double* x,
                  std::vector<double>& pre_hidden, std::vector<double>& hidden,
                  std::vector<double>& logits) const {
  const int in = shape_.input_dim;
  const int hid = shape_.hidden_dim;
  const int cls = shape_.classes;
  const double* w1 = params.data();
  const double* b1 = w1 + in * hid;
  const double* w2 = b1 + hid;
  const double* b2 = w2 + hid * cls;
  pre_hidden.assign(hid, 0.0);
  hidden.assign(hid, 0.0);
  logits.assign(cls, 0.0);
  for (int j = 0; j < hid; ++j) {
    double acc = b1[j];
    const double* row = w1 + j * in;
    for (int i = 0; i < in; ++i) acc += row[i] * x[i];
    pre_hidden[j] = acc;
    hidden[j] = acc > 0.0 ? acc : 0.0;
  }
  for (int c = 0; c < cls; ++c) {
    double acc = b2[c];
    const double* row = w2 + c * hid;
    for (int j = 0; j < hid; ++j) acc += row[j] * hidden[j];
    logits[c] = acc;
  }
}

double Mlp::MeanLoss(std::span<const double> params, const Matrix& features,
                     std::span<const int> labels,
                     std::span<const std::size_t> rows) const {
  if (rows.empty()) {
    throw std::invalid_argument("MeanLoss: row selection must be non-empty");
  }
  std::vector<double> pre_hidden, hidden, logits;
  double loss = 0.0;
  for (std::size_t row : rows) {
    Forward(params, features.Row(row), pre_hidden, hidden, logits);
    loss += LogSumExp(logits) - logits[labels[row]];
  }
  return loss / static_cast<double>(rows.size());
}

double Mlp::MeanLossAndGradient(std::span<const double> params,
                                const Matrix& features,
                                std::span<const int> labels,
                                std::span<const std::size_t> rows,
                                std::span<double> grad) const {
  if (rows.empty()) {
    throw std::invalid_argument(
        "MeanLossAndGradient: row selection must be non-empty");
  }
  if (static_cast<int>(grad.size()) != shape_.ParameterCount()) {
    throw std::invalid_argument(
        "MeanLossAndGradient: grad has the wrong length");
  }
  const int in = shape_.input_dim;
  const int hid = shape_.hidden_dim;
  const int cls = shape_.classes;
  const double* w1 = params.data();
  const double* w2 = w1 + in * hid + hid;
  double* g_w1 = grad.data();
  double* g_b1 = g_w1 + in * hid;
  double* g_w2 = g_b1 + hid;
  double* g_b2 = g_w2 + hid * cls;
  std::fill(grad.begin(), grad.end(), 0.0);

  std::vector<double> pre_hidden, hidden, logits;
  std::vector<double> d_logits(cls), d_hidden(hid);
  double loss = 0.0;
  for (std::size_t row : rows) {
    const double* x = features.Row(row);
    const int label = labels[row];
    Forward(params, x, pre_hidden, hidden, logits);
    const double lse = LogSumExp(logits);
    loss += lse - logits[label];
    for (int c = 0; c < cls; ++c) {
      d_logits[c] = std::exp(logits[c] - lse) - (c == label ? 1.0 : 0.0);
    }
    for (int c = 0; c < cls; ++c) {
      g_b2[c] += d_logits[c];
      double* g_row = g_w2 + c * hid;
      for (int j = 0; j < hid; ++j) g_row[j] += d_logits[c] * hidden[j];
    }
    for (int j = 0; j < hid; ++j) {
      if (pre_hidden[j] <= 0.0) {
        d_hidden[j] = 0.0;
        continue;
      }
      double acc = 0.0;
      for (int c = 0; c < cls; ++c) acc += w2[c * hid + j] * d_logits[c];
      d_hidden[j] = acc;
    }
    for (int j = 0; j < hid; ++j) {
      if (d_hidden[j] == 0.0) continue;
      g_b1[j] += d_hidden[j];
      double* g_row = g_w1 + j * in;
      for (int i = 0; i < in; ++i) g_row[i] += d_hidden[j] * x[i];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (double& g : grad) g *= inv_n;
  return loss * inv_n;
}

int Mlp::Predict(std::span<const double> params, const double* x) const {
  std::vector<double> pre_hidden, hidden, logits;
  Forward(params, x, pre_hidden, hidden, logits);
  return static_cast<int>(
      std::max_element(logits.begin(), logits.end()) - logits.begin());
}

}  // namespace qmgeo
