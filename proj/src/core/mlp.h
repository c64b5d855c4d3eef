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

#ifndef QMGEO_CORE_MLP_H_
#define QMGEO_CORE_MLP_H_

#include <span>
#include <vector>

#include "core/matrix.h"
#include "core/random.h"

namespace qmgeo {

struct MlpShape {
  int input_dim;
  int hidden_dim;
  int classes;
  int ParameterCount() const {
    return input_dim * hidden_dim + hidden_dim + hidden_dim * classes +
           classes;
  }
  void Validate() const;
};

// One-hidden-layer network: affine -> ReLU -> affine -> softmax, trained with
// mean cross-entropy. Parameters are flattened in the fixed order
// [W1 (hidden x input), b1, W2 (classes x hidden), b2].
class Mlp {
 public:
  explicit Mlp(MlpShape shape);

  const MlpShape& shape() const { return shape_; }

  // Weights uniform in +-1/sqrt(fan_in), biases zero.
  std::vector<double> InitParams(RandomStream stream) const;

  // Mean cross-entropy over the selected rows.
  double MeanLoss(std::span<const double> params, const Matrix& features,
                  std::span<const int> labels,
                  std::span<const std::size_t> rows) const;

  // Mean loss and its gradient with respect to the flattened parameters.
  // grad must have ParameterCount() entries; it is overwritten.
  double MeanLossAndGradient(std::span<const double> params,
                             const Matrix& features, std::span<const int> labels,
                             std::span<const std::size_t> rows,
                             std::span<double> grad) const;

  int Predict(std::span<const double> params, const double* x) const;

 private:
  void Forward(std::span<const double> params, const double* x,
               std::vector<double>& pre_hidden, std::vector<double>& hidden,
               std::vector<double>& logits) const;

  MlpShape shape_;
};

}  // namespace qmgeo

#endif  // QMGEO_CORE_MLP_H_
