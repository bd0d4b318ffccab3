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

#ifndef EOT_DUAL_SOLVER_HPP_
#define EOT_DUAL_SOLVER_HPP_

#include <functional>
#include <optional>

#include "eot/cost.hpp"
#include "eot/measure.hpp"

namespace eot {

// Dual potentials tabulated on the atoms of (mu, nu). `normalized` records
// that the nu-weighted mean of g is zero.
struct PotentialPair {
  Vector f;
  Vector g;
  bool normalized = false;
};

// Gradient of the entropic dual objective with respect to the potential
// tables. Components are plain partial derivatives,
//   f[i] = u_i (1 - sum_j w_j p_ij),  g[j] = w_j (1 - sum_i u_i p_ij),
// while `norm_squared` is the L2(mu) x L2(nu) norm of the gradient,
//   sum_i u_i (1 - sum_j w_j p_ij)^2 + sum_j w_j (1 - sum_i u_i p_ij)^2.
struct DualGradient {
  Vector f;
  Vector g;
  double norm_squared = 0.0;

  double norm() const;
};

struct SolveReport {
  PotentialPair potentials;
  double dual_value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Value of
//   u.f + w.g - (1/eta) sum_ij u_i w_j exp(-eta (c_ij - f_i - g_j)) + 1/eta,
// with the exponential sum accumulated in the log domain. With uniform
// weights this is the empirical objective; with general weights it is the
// population objective of a finitely supported pair.
double dual_objective(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      const PotentialPair& fg, double eta);
double dual_objective(const CostMatrix& cost, const DiscreteMeasure& mu,
                      const DiscreteMeasure& nu, const PotentialPair& fg, double eta);

DualGradient dual_gradient(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const PotentialPair& fg, double eta);
DualGradient dual_gradient(const CostMatrix& cost, const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu, const PotentialPair& fg, double eta);

// Called after every full (f, g) sweep with the 1-based iteration count.
using IterationObserver = std::function<void(int, const PotentialPair&)>;

// Log-domain alternating block maximization of the dual. Stops once the
// gradient norm is <= cfg.tolerance; the returned potentials are recentered
// so that nu(g) = 0. Running out of iterations is reported through
// `converged`, not thrown. Throws ValidationError on invalid configuration or
// on measures outside the radius-1/2 ball.
SolveReport sinkhorn_solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Config& cfg,
                           const std::optional<PotentialPair>& init = std::nullopt,
                           const IterationObserver& observer = {});

// (f + c, g - c) with c the reference-weighted mean of g.
PotentialPair recenter(const PotentialPair& fg, const DiscreteMeasure& reference);

// ||(a.f - b.f, a.g - b.g)|| in L2(mu) x L2(nu).
double potential_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const PotentialPair& a, const PotentialPair& b);

// Membership in S_L: sup norms at most L and nu(g) = 0 (to 1e-10).
bool in_bounded_set(const DiscreteMeasure& nu, const PotentialPair& fg, double bound);

// Two sides of an inequality lhs <= rhs evaluated numerically.
struct Certificate {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds(double slack = 0.0) const { return lhs <= rhs + slack; }
};

// Suboptimality gap against the squared-gradient bound
//   Phi(solution) - Phi(fg) <= e^{eta (2L + 1)} / (2 eta) ||grad Phi(fg)||^2.
// Throws ValidationError when fg is not in S_L.
Certificate pl_gap_certificate(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const PotentialPair& fg, const PotentialPair& solution, double eta,
                               double bound);

// Phi(a) - Phi(b) >= <grad Phi(a), a - b> + (delta / 2) ||a - b||^2 with
// delta = eta e^{-eta (2L + 1)}, reported as (rhs, lhs) so that holds()
// checks the lower bound. Both pairs must lie in S_L.
Certificate strong_concavity_certificate(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                         const PotentialPair& a, const PotentialPair& b,
                                         double eta, double bound);

// ||solution - recenter(fg)|| <= e^{eta (2L + 1)} / eta ||grad Phi(fg)||,
// for fg whose recentered version lies in S_L (L = 2 gives e^{5 eta}).
Certificate error_bound_certificate(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const PotentialPair& fg, const PotentialPair& solution,
                                    double eta, double bound = 2.0);

}  // namespace eot

#endif  // EOT_DUAL_SOLVER_HPP_
