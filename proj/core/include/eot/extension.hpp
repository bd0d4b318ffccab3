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

#ifndef EOT_EXTENSION_HPP_
#define EOT_EXTENSION_HPP_

#include <functional>
#include <optional>

#include "eot/dual_solver.hpp"
#include "eot/measure.hpp"

namespace eot {

// Out-of-sample extension of solved dual potentials. f is extended from
// (nu, g) by the x-marginal equation,
//   f(x) = -(1/eta) log sum_j w_j exp(-eta |x - y_j|^2 + eta g_j),
// and g symmetrically from (mu, f). The mu side is optional: without it only
// the f-side quantities (f, the conditional weights, the map, regressions)
// are available.
class ExtendedPotentials {
 public:
  ExtendedPotentials(std::optional<DiscreteMeasure> mu, DiscreteMeasure nu,
                     PotentialPair potentials, double eta);

  double f(const Eigen::Ref<const Vector>& x) const;
  // Throws std::logic_error when constructed without mu.
  double g(const Eigen::Ref<const Vector>& y) const;

  // exp(-eta (|x - y|^2 - f(x) - g(y))) with both potentials extended.
  double density(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const;

  // Entries w_j p(x, y_j), using the stored g at the nu atoms. They are
  // nonnegative and sum to one up to round-off.
  Vector conditional_weights(const Eigen::Ref<const Vector>& x) const;

  // Barycentric projection sum_j w_j p(x, y_j) y_j / sum_j w_j p(x, y_j).
  Vector map(const Eigen::Ref<const Vector>& x) const;

  bool has_mu() const { return mu_.has_value(); }
  const DiscreteMeasure& mu() const;
  const DiscreteMeasure& nu() const { return nu_; }
  const PotentialPair& potentials() const { return potentials_; }
  double eta() const { return eta_; }

 private:
  std::optional<DiscreteMeasure> mu_;
  DiscreteMeasure nu_;
  PotentialPair potentials_;
  double eta_;
  Vector log_u_;
  Vector log_w_;
};

// p_ij = exp(-eta (c_ij - f_i - g_j)) on the atoms of (mu, nu).
struct CouplingDensity {
  Matrix values;

  // sum_j w_j p_ij and sum_i u_i p_ij.
  Vector row_mass(const DiscreteMeasure& nu) const;
  Vector col_mass(const DiscreteMeasure& mu) const;
};

CouplingDensity coupling_density(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 const PotentialPair& fg, double eta);

struct CostEstimate {
  double dual = 0.0;    // Phi at the solution; this is the estimate
  double primal = 0.0;  // pi(c) + (1/eta) KL(pi | mu x nu)
};

// Plug-in entropic cost from a converged report. Also evaluates the primal
// value from the density and throws ConvergenceError if the two disagree by
// more than 100 * tolerance. An unconverged report is rejected.
CostEstimate cost_estimate(const SolveReport& report, const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu, double eta, double tolerance);

using PairFunction = std::function<double(const Eigen::Ref<const Vector>&,
                                          const Eigen::Ref<const Vector>&)>;

// sum_ij u_i w_j p_ij phi(x_i, y_j). A non-finite phi value is an error.
double coupling_functional(const CouplingDensity& density, const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu, const PairFunction& phi);

}  // namespace eot

#endif  // EOT_EXTENSION_HPP_
