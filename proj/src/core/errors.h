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

#ifndef QMGEO_CORE_ERRORS_H_
#define QMGEO_CORE_ERRORS_H_

#include <stdexcept>

namespace qmgeo {

// Malformed input files (datasets, metrics tables). Messages carry the
// file name and line number where known.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iteration failed to converge or a result left its numeric domain.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmgeo

#endif  // QMGEO_CORE_ERRORS_H_
