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

#ifndef QMGEO_CORE_MATRIX_H_
#define QMGEO_CORE_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace qmgeo {

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double* Row(std::size_t i) { return data.data() + i * cols; }
  const double* Row(std::size_t i) const { return data.data() + i * cols; }
  std::span<const double> RowSpan(std::size_t i) const {
    return {Row(i), cols};
  }
  double& At(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double At(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool operator==(const Matrix&) const = default;
};

}  // namespace qmgeo

#endif  // QMGEO_CORE_MATRIX_H_
