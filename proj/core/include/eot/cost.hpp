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

#ifndef EOT_COST_HPP_
#define EOT_COST_HPP_

#include "eot/measure.hpp"

namespace eot {

// Ground cost between two points. Only the squared Euclidean cost is
// supported; every estimator calls through here, so a uniformly bounded
// alternative cost would be added at this seam.
template <typename A, typename B>
double squared_euclidean(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  return (x - y).squaredNorm();
}

// Dense m x k table of c(x_i, y_j). Keeps both orientations so row sweeps
// (over j) and column sweeps (over i) read contiguous memory.
class CostMatrix {
 public:
  CostMatrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

  Eigen::Index rows() const { return by_row_.cols(); }
  Eigen::Index cols() const { return by_col_.cols(); }

  double operator()(Eigen::Index i, Eigen::Index j) const { return by_col_(i, j); }

  // Column i of the transposed table: c(x_i, y_j) for all j.
  auto row(Eigen::Index i) const { return by_row_.col(i); }
  // c(x_i, y_j) for all i.
  auto col(Eigen::Index j) const { return by_col_.col(j); }

  const Matrix& values() const { return by_col_; }

 private:
  Matrix by_col_;  // m x k
  Matrix by_row_;  // k x m
};

}  // namespace eot

#endif  // EOT_COST_HPP_
