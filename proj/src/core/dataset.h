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

#ifndef QMGEO_CORE_DATASET_H_
#define QMGEO_CORE_DATASET_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/matrix.h"

namespace qmgeo {

// Feature matrix with class labels, split into per-client training
// partitions plus a server-side holdout. Partitions and holdout are disjoint
// and cover every sample.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  int classes = 0;
  std::vector<std::vector<std::size_t>> partition;
  std::vector<std::size_t> holdout;

  std::size_t TrainSampleCount() const;
  std::size_t MinPartitionSize() const;
};

struct SyntheticSpec {
  std::uint64_t seed = 0;
  int samples = 0;
  int input_dim = 0;
  int classes = 0;
  double separation = 4.0;
};

// Gaussian class blobs with axis-aligned means `separation` from the origin.
// Deterministic given the seed; the split shuffle is derived from it too.
Dataset MakeSyntheticDataset(const SyntheticSpec& spec, int clients,
                             double holdout_fraction);

// Parses a header + numeric rows CSV; the named column holds integral class
// labels, every other column is a feature. Ragged or non-numeric rows raise
// DataError naming the line.
Dataset LoadCsvDataset(const std::string& path, const std::string& label_column,
                       int clients, double holdout_fraction,
                       std::uint64_t seed);

void SaveCsvDataset(const std::string& path, const Matrix& features,
                    std::span<const int> labels,
                    const std::string& label_column);

struct PcaBasis {
  std::vector<double> mean;   // feature mean over the fitted rows
  Matrix components;          // k x input_dim, orthonormal rows
  std::vector<double> eigenvalues;  // descending
};

// Top-k covariance eigenvectors by deflated power iteration over the given
// rows. Throws NumericError with the residual when iteration stalls.
PcaBasis ComputePcaBasis(const Matrix& features,
                         std::span<const std::size_t> rows, int k);

std::vector<double> PcaProject(const PcaBasis& basis, const double* x);

// Fits the basis on the training partitions only, then projects every sample
// (holdout included) with it.
Dataset PcaReduce(const Dataset& dataset, int k);

}  // namespace qmgeo

#endif  // QMGEO_CORE_DATASET_H_
