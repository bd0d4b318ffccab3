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

#ifndef EOT_ORACLE_HPP_
#define EOT_ORACLE_HPP_

#include <vector>

#include "eot/dual_solver.hpp"
#include "eot/extension.hpp"
#include "eot/measure.hpp"
#include "eot/rng.hpp"

namespace eot {

// Exact population quantities for a pair of finitely supported marginals.
struct PopulationTruth {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  PotentialPair potentials;  // f_star, g_star with nu(g_star) = 0
  CouplingDensity density;   // p_star on mu x nu atoms
  double cost = 0.0;         // S, the dual value
  double primal_cost = 0.0;  // same quantity from the primal side
  PointCloud map;            // b_star(x_i), one row per mu atom
  double eta = 1.0;
  int iterations = 0;
  double gradient_norm = 0.0;
};

// Gradient-norm tolerance the oracle iterates to.
inline constexpr double kOracleTolerance = 1e-13;

// Solves the weighted marginal equations with a plain multiplicative scaling
// iteration written independently of sinkhorn_solve (direct sums of the
// Gibbs kernel, no log domain). Throws ValidationError for unbounded supports
// and ConvergenceError if the tolerance is not reached or primal and dual
// values disagree by more than 1e-10.
PopulationTruth compute_truth(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double eta);

// n i.i.d. atom indices by inverse CDF over the atom order.
std::vector<Eigen::Index> sample_indices(const DiscreteMeasure& measure, int n, RngStream& rng);
PointCloud sample_from(const DiscreteMeasure& measure, int n, RngStream& rng);
PointCloud gather_points(const DiscreteMeasure& measure, const std::vector<Eigen::Index>& indices);

// h_star(x_i) = sum_j w_j m(y_j) p_star(x_i, y_j) for a per-nu-atom
// conditional label mean m.
Vector truth_regression(const PopulationTruth& truth, const Vector& conditional_mean);

// Var of p_star(X, Y) with X ~ mu and Y ~ nu independent.
double density_variance(const PopulationTruth& truth);

}  // namespace eot

#endif  // EOT_ORACLE_HPP_
