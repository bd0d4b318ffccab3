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

#include "eot/dual_solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "eot/errors.hpp"
#include "log_sum_exp.hpp"

namespace eot {

namespace {

void check_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const PotentialPair& fg) {
  if (mu.dim() != nu.dim()) throw ValidationError("measures have different dimensions");
  if (fg.f.size() != mu.size() || fg.g.size() != nu.size()) {
    throw ValidationError("potential lengths (" + std::to_string(fg.f.size()) + ", " +
                          std::to_string(fg.g.size()) + ") do not match measure sizes (" +
                          std::to_string(mu.size()) + ", " + std::to_string(nu.size()) + ")");
  }
  if (!fg.f.allFinite() || !fg.g.allFinite()) {
    throw ValidationError("potentials contain NaN or infinite entries");
  }
}

void check_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be positive");
}

Vector log_weights(const Vector& w) {
  Vector out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    out[i] = w[i] > 0.0 ? std::log(w[i]) : -std::numeric_limits<double>::infinity();
  }
  return out;
}

// Weighted gradient norm squared in one pass over the kernel.
double gradient_norm_squared(const CostMatrix& cost, const Vector& u, const Vector& w,
                             const PotentialPair& fg, double eta) {
  const auto m = u.size();
  const auto k = w.size();
  Vector row_mass = Vector::Zero(m);
  double col_term = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::ArrayXd p = (-eta * (cost.col(j).array() - fg.f.array() - fg.g[j])).exp();
    row_mass.array() += w[j] * p;
    const double col_mass = (u.array() * p).sum();
    col_term += w[j] * (1.0 - col_mass) * (1.0 - col_mass);
  }
  const double row_term = (u.array() * (1.0 - row_mass.array()).square()).sum();
  return row_term + col_term;
}

}  // namespace

double DualGradient::norm() const { return std::sqrt(norm_squared); }

double dual_objective(const CostMatrix& cost, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      const PotentialPair& fg, double eta) {
  check_eta(eta);
  check_pair(mu, nu, fg);
  const Vector log_u = log_weights(mu.weights());
  const Vector log_w = log_weights(nu.weights());
  // log of sum_ij u_i w_j exp(-eta (c_ij - f_i - g_j)), column by column.
  Vector col_lse(nu.size());
  Eigen::ArrayXd terms(mu.size());
  for (Eigen::Index j = 0; j < nu.size(); ++j) {
    terms = log_u.array() + log_w[j] - eta * (cost.col(j).array() - fg.f.array() - fg.g[j]);
    col_lse[j] = detail::log_sum_exp(terms);
  }
  const double mass = std::exp(detail::log_sum_exp(col_lse.array()));
  return mu.weights().dot(fg.f) + nu.weights().dot(fg.g) - mass / eta + 1.0 / eta;
}

double dual_objective(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const PotentialPair& fg,
                      double eta) {
  return dual_objective(CostMatrix(mu, nu), mu, nu, fg, eta);
}

DualGradient dual_gradient(const CostMatrix& cost, const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu, const PotentialPair& fg, double eta) {
  check_eta(eta);
  check_pair(mu, nu, fg);
  const Vector& u = mu.weights();
  const Vector& w = nu.weights();
  Vector row_mass = Vector::Zero(mu.size());
  Vector col_mass(nu.size());
  for (Eigen::Index j = 0; j < nu.size(); ++j) {
    Eigen::ArrayXd p = (-eta * (cost.col(j).array() - fg.f.array() - fg.g[j])).exp();
    row_mass.array() += w[j] * p;
    col_mass[j] = (u.array() * p).sum();
  }
  DualGradient grad;
  const Eigen::ArrayXd row_res = 1.0 - row_mass.array();
  const Eigen::ArrayXd col_res = 1.0 - col_mass.array();
  grad.f = (u.array() * row_res).matrix();
  grad.g = (w.array() * col_res).matrix();
  grad.norm_squared = (u.array() * row_res.square()).sum() + (w.array() * col_res.square()).sum();
  return grad;
}

DualGradient dual_gradient(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const PotentialPair& fg, double eta) {
  return dual_gradient(CostMatrix(mu, nu), mu, nu, fg, eta);
}

PotentialPair recenter(const PotentialPair& fg, const DiscreteMeasure& reference) {
  if (fg.g.size() != reference.size()) {
    throw ValidationError("recenter: g has " + std::to_string(fg.g.size()) +
                          " entries, reference has " + std::to_string(reference.size()) + " atoms");
  }
  const double shift = reference.weights().dot(fg.g);
  PotentialPair out;
  out.f = fg.f.array() + shift;
  out.g = fg.g.array() - shift;
  out.normalized = true;
  return out;
}

SolveReport sinkhorn_solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Config& cfg,
                           const std::optional<PotentialPair>& init,
                           const IterationObserver& observer) {
  cfg.validate();
  if (mu.dim() != nu.dim()) throw ValidationError("measures have different dimensions");
  if (!validate_support(mu) || !validate_support(nu)) {
    throw ValidationError(
        "support points must lie in the ball of radius 1/2 (bounded-support assumption); "
        "normalize the data first");
  }
  const auto m = mu.size();
  const auto k = nu.size();
  const double eta = cfg.eta;
  const CostMatrix cost(mu, nu);
  const Vector log_u = log_weights(mu.weights());
  const Vector log_w = log_weights(nu.weights());

  PotentialPair fg;
  if (init) {
    check_pair(mu, nu, *init);
    fg.f = init->f;
    fg.g = init->g;
  } else {
    fg.f = Vector::Zero(m);
    fg.g = Vector::Zero(k);
  }

  SolveReport report;
  Eigen::ArrayXd scratch_k(k);
  Eigen::ArrayXd scratch_m(m);
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    // f_i = -(1/eta) lse_j(log w_j - eta c_ij + eta g_j)
    for (Eigen::Index i = 0; i < m; ++i) {
      scratch_k = log_w.array() - eta * (cost.row(i).array() - fg.g.array());
      fg.f[i] = -detail::log_sum_exp(scratch_k) / eta;
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      scratch_m = log_u.array() - eta * (cost.col(j).array() - fg.f.array());
      fg.g[j] = -detail::log_sum_exp(scratch_m) / eta;
    }
    fg.normalized = false;
    report.iterations = it;
    if (observer) observer(it, fg);

    const double grad_sq = gradient_norm_squared(cost, mu.weights(), nu.weights(), fg, eta);
    if (std::sqrt(grad_sq) <= cfg.tolerance) {
      // Recentering moves entries by round-off only; re-check on the pair we return.
      PotentialPair centered = recenter(fg, nu);
      const double centered_norm =
          std::sqrt(gradient_norm_squared(cost, mu.weights(), nu.weights(), centered, eta));
      if (centered_norm <= cfg.tolerance) {
        report.potentials = std::move(centered);
        report.gradient_norm = centered_norm;
        report.converged = true;
        break;
      }
      fg = std::move(centered);
    }
  }
  if (!report.converged) {
    report.potentials = recenter(fg, nu);
    report.gradient_norm =
        std::sqrt(gradient_norm_squared(cost, mu.weights(), nu.weights(), report.potentials, eta));
    report.converged = report.gradient_norm <= cfg.tolerance;
  }
  report.dual_value = dual_objective(cost, mu, nu, report.potentials, eta);
  return report;
}

double potential_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const PotentialPair& a, const PotentialPair& b) {
  check_pair(mu, nu, a);
  check_pair(mu, nu, b);
  const double df = (mu.weights().array() * (a.f - b.f).array().square()).sum();
  const double dg = (nu.weights().array() * (a.g - b.g).array().square()).sum();
  return std::sqrt(df + dg);
}

bool in_bounded_set(const DiscreteMeasure& nu, const PotentialPair& fg, double bound) {
  if (fg.g.size() != nu.size()) return false;
  if (fg.f.size() == 0) return false;
  const double sup_norm = std::max(fg.f.cwiseAbs().maxCoeff(), fg.g.cwiseAbs().maxCoeff());
  return sup_norm <= bound && std::abs(nu.weights().dot(fg.g)) <= 1e-10;
}

namespace {

void require_bounded(const DiscreteMeasure& nu, const PotentialPair& fg, double bound,
                     const char* which) {
  if (!in_bounded_set(nu, fg, bound)) {
    throw ValidationError(std::string(which) + " is outside the bounded set S_L (L = " +
                          std::to_string(bound) + ")");
  }
}

}  // namespace

Certificate pl_gap_certificate(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const PotentialPair& fg, const PotentialPair& solution, double eta,
                               double bound) {
  check_pair(mu, nu, fg);
  require_bounded(nu, fg, bound, "candidate pair");
  const CostMatrix cost(mu, nu);
  const double gap =
      dual_objective(cost, mu, nu, solution, eta) - dual_objective(cost, mu, nu, fg, eta);
  const double grad_sq = dual_gradient(cost, mu, nu, fg, eta).norm_squared;
  return {gap, std::exp(eta * (2.0 * bound + 1.0)) / (2.0 * eta) * grad_sq};
}

Certificate strong_concavity_certificate(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                         const PotentialPair& a, const PotentialPair& b,
                                         double eta, double bound) {
  check_pair(mu, nu, a);
  check_pair(mu, nu, b);
  require_bounded(nu, a, bound, "first pair");
  require_bounded(nu, b, bound, "second pair");
  const CostMatrix cost(mu, nu);
  const double delta = eta * std::exp(-eta * (2.0 * bound + 1.0));
  const DualGradient grad = dual_gradient(cost, mu, nu, a, eta);
  const double inner = grad.f.dot(a.f - b.f) + grad.g.dot(a.g - b.g);
  const double dist = potential_distance(mu, nu, a, b);
  const double gap = dual_objective(cost, mu, nu, a, eta) - dual_objective(cost, mu, nu, b, eta);
  // lower bound <= gap
  return {inner + 0.5 * delta * dist * dist, gap};
}

Certificate error_bound_certificate(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const PotentialPair& fg, const PotentialPair& solution,
                                    double eta, double bound) {
  check_pair(mu, nu, fg);
  const PotentialPair centered = recenter(fg, nu);
  require_bounded(nu, centered, bound, "recentered pair");
  const double dist = potential_distance(mu, nu, solution, centered);
  const double grad_norm = dual_gradient(mu, nu, fg, eta).norm();
  return {dist, std::exp(eta * (2.0 * bound + 1.0)) / eta * grad_norm};
}

}  // namespace eot
