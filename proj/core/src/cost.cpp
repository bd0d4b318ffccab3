/* Copyright 2026 The eot Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "eot/cost.hpp"

#include "eot/errors.hpp"

namespace eot {

CostMatrix::CostMatrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) throw ValidationError("cost: measures have different dimensions");
  const auto m = mu.size();
  const auto k = nu.size();
  by_col_.resize(m, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      by_col_(i, j) = squared_euclidean(mu.point(i), nu.point(j));
    }
  }
  by_row_ = by_col_.transpose();
}

}  // namespace eot
