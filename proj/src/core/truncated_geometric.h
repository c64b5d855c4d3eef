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

#ifndef QMGEO_CORE_TRUNCATED_GEOMETRIC_H_
#define QMGEO_CORE_TRUNCATED_GEOMETRIC_H_

#include "core/discrete_distribution.h"

namespace qmgeo {

// Geometric distribution renormalized onto the support {1, ..., support_size}.
struct TGeoParams {
  double p;          // success probability, (0, 1]
  int support_size;  // >= 1
  void Validate() const;
};

// Mass at k is p*(1-p)^(k-1) / (1 - (1-p)^support_size). For p = 1 this is a
// point mass at 1.
DiscreteDistribution TgeoPmf(const TGeoParams& params);

// Closed-form mean; agrees with BruteForceMoments to 1e-12 relative error.
// For p = 1 the closed form degenerates and the brute-force value (1) is
// returned instead.
double TgeoMeanClosedForm(const TGeoParams& params);

// Published closed-form variance, reproduced verbatim for documentation.
// It evaluates negative for many valid parameters (see tests), so
// BruteForceMoments is the trusted variance source everywhere else.
double TgeoVarianceClosedForm(const TGeoParams& params);

}  // namespace qmgeo

#endif  // QMGEO_CORE_TRUNCATED_GEOMETRIC_H_
