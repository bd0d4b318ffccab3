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

#ifndef EOT_SRC_LOG_SUM_EXP_HPP_
#define EOT_SRC_LOG_SUM_EXP_HPP_

#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace eot::detail {

// Max-shifted log(sum exp(v)). Entries equal to -inf (zero-weight atoms)
// contribute nothing; an all -inf input returns -inf.
template <typename Derived>
double log_sum_exp(const Eigen::ArrayBase<Derived>& v) {
  const double top = v.maxCoeff();
  if (top == -std::numeric_limits<double>::infinity()) return top;
  return top + std::log((v - top).exp().sum());
}

}  // namespace eot::detail

#endif  // EOT_SRC_LOG_SUM_EXP_HPP_
