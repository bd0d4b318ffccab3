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

#ifndef EOT_TRANSFER_HPP_
#define EOT_TRANSFER_HPP_

#include <functional>
#include <vector>

#include "eot/extension.hpp"
#include "eot/oracle.hpp"

namespace eot {

// Labels attached row-for-row to the Y sample the solver saw.
struct LabeledSample {
  PointCloud y_points;
  Vector labels;

  // Throws ValidationError on a length mismatch or a label outside [-1, 1].
  void validate() const;
};

// Class-1 probability per nu atom, plus the margin exponent and constant the
// scenario was built for.
struct MarginScenario {
  Vector class_probabilities;
  double alpha = 1.0;
  double c0 = 1.0;

  void validate() const;
};

// h_n(x) = sum_j w_j A_j p_n(x, y_j). Throws ValidationError unless
// `labeled.y_points` is exactly the extension's nu support.
double plugin_regression(const ExtendedPotentials& ext, const LabeledSample& labeled,
                         const Eigen::Ref<const Vector>& x);

// Largest |sum_j w_j p_ij (h_n(x_i) - A_j)| over the source atoms: the
// stationarity residual of the coupling-weighted least squares at h_n.
// Requires an extension built with mu.
double regression_stationarity_residual(const ExtendedPotentials& ext,
                                        const LabeledSample& labeled);

// 1 iff h_n(x) > 1/2; ties go to class 0. Labels must be 0 or 1.
int plugin_classifier(const ExtendedPotentials& ext, const LabeledSample& labeled,
                      const Eigen::Ref<const Vector>& x);

// Bayes rule 1[h_star > 1/2] at each mu atom.
std::vector<int> bayes_decisions(const Vector& h_star);

// Exact excess risk on the finite support:
//   sum_i u_i |2 h_star(x_i) - 1| 1[decision_i != bayes_i].
double excess_risk(const PopulationTruth& truth, const MarginScenario& scenario,
                   const std::vector<int>& decisions);
double excess_risk(const PopulationTruth& truth, const MarginScenario& scenario,
                   const std::function<int(const Eigen::Ref<const Vector>&)>& classifier);

// Smallest C0 with mu(0 < |h - 1/2| <= eps) <= C0 eps^alpha for all
// eps in (0, 1/2]. On a finite support the supremum is attained at a gap.
double margin_constant(const Vector& h_star, const Vector& weights, double alpha);

}  // namespace eot

#endif  // EOT_TRANSFER_HPP_
