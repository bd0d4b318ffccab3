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

#include "eot/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "eot/cost.hpp"
#include "eot/errors.hpp"
#include "log_sum_exp.hpp"

namespace eot {

namespace {

Vector log_weights(const Vector& w) {
  Vector out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    out[i] = w[i] > 0.0 ? std::log(w[i]) : -std::numeric_limits<double>::infinity();
  }
  return out;
}

void check_query(const Eigen::Ref<const Vector>& x, Eigen::Index d) {
  if (x.size() != d) {
    throw ValidationError("query point has dimension " + std::to_string(x.size()) +
                          ", expected " + std::to_string(d));
  }
}

// log w_j - eta |x - y_j|^2 + eta pot_j over the atoms of `m`.
Eigen::ArrayXd exponent_terms(const DiscreteMeasure& m, const Vector& log_weight,
                              const Vector& potential, double eta,
                              const Eigen::Ref<const Vector>& x) {
  Eigen::ArrayXd t(m.size());
  for (Eigen::Index j = 0; j < m.size(); ++j) {
    t[j] = log_weight[j] - eta * (squared_euclidean(x.transpose(), m.point(j)) - potential[j]);
  }
  return t;
}

}  // namespace

ExtendedPotentials::ExtendedPotentials(std::optional<DiscreteMeasure> mu, DiscreteMeasure nu,
                                       PotentialPair potentials, double eta)
    : mu_(std::move(mu)), nu_(std::move(nu)), potentials_(std::move(potentials)), eta_(eta) {
  if (!(eta_ > 0.0)) throw ValidationError("eta must be positive");
  if (potentials_.g.size() != nu_.size()) {
    throw ValidationError("g has " + std::to_string(potentials_.g.size()) + " entries, nu has " +
                          std::to_string(nu_.size()) + " atoms");
  }
  if (!potentials_.g.allFinite() || !potentials_.f.allFinite()) {
    throw ValidationError("potentials contain NaN or infinite entries");
  }
  log_w_ = log_weights(nu_.weights());
  if (mu_) {
    if (mu_->dim() != nu_.dim()) throw ValidationError("measures have different dimensions");
    if (potentials_.f.size() != mu_->size()) {
      throw ValidationError("f has " + std::to_string(potentials_.f.size()) + " entries, mu has " +
                            std::to_string(mu_->size()) + " atoms");
    }
    log_u_ = log_weights(mu_->weights());
  }
}

const DiscreteMeasure& ExtendedPotentials::mu() const {
  if (!mu_) throw std::logic_error("extension was built without the source measure");
  return *mu_;
}

double ExtendedPotentials::f(const Eigen::Ref<const Vector>& x) const {
  check_query(x, nu_.dim());
  return -detail::log_sum_exp(exponent_terms(nu_, log_w_, potentials_.g, eta_, x)) / eta_;
}

double ExtendedPotentials::g(const Eigen::Ref<const Vector>& y) const {
  const DiscreteMeasure& source = mu();
  check_query(y, source.dim());
  return -detail::log_sum_exp(exponent_terms(source, log_u_, potentials_.f, eta_, y)) / eta_;
}

double ExtendedPotentials::density(const Eigen::Ref<const Vector>& x,
                                   const Eigen::Ref<const Vector>& y) const {
  check_query(x, nu_.dim());
  check_query(y, nu_.dim());
  return std::exp(-eta_ * (squared_euclidean(x, y) - f(x) - g(y)));
}

Vector ExtendedPotentials::conditional_weights(const Eigen::Ref<const Vector>& x) const {
  check_query(x, nu_.dim());
  const Eigen::ArrayXd t = exponent_terms(nu_, log_w_, potentials_.g, eta_, x);
  // w_j p(x, y_j) = exp(t_j + eta f(x)) = exp(t_j - lse(t))
  return (t - detail::log_sum_exp(t)).exp().matrix();
}

Vector ExtendedPotentials::map(const Eigen::Ref<const Vector>& x) const {
  const Vector weights = conditional_weights(x);
  return nu_.points().transpose() * weights / weights.sum();
}

Vector CouplingDensity::row_mass(const DiscreteMeasure& nu) const { return values * nu.weights(); }

Vector CouplingDensity::col_mass(const DiscreteMeasure& mu) const {
  return values.transpose() * mu.weights();
}

CouplingDensity coupling_density(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 const PotentialPair& fg, double eta) {
  if (fg.f.size() != mu.size() || fg.g.size() != nu.size()) {
    throw ValidationError("potential lengths do not match measure sizes");
  }
  const CostMatrix cost(mu, nu);
  CouplingDensity out;
  out.values.resize(mu.size(), nu.size());
  for (Eigen::Index j = 0; j < nu.size(); ++j) {
    out.values.col(j) = (-eta * (cost.col(j).array() - fg.f.array() - fg.g[j])).exp().matrix();
  }
  return out;
}

CostEstimate cost_estimate(const SolveReport& report, const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu, double eta, double tolerance) {
  if (!report.converged) throw ConvergenceError("cost_estimate requires a converged report");
  const CouplingDensity density = coupling_density(mu, nu, report.potentials, eta);
  const CostMatrix cost(mu, nu);
  const double floor = 0.5 * std::exp(-5.0 * eta);
  double transport = 0.0;
  double kl = 0.0;
  for (Eigen::Index j = 0; j < nu.size(); ++j) {
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      const double mass = mu.weight(i) * nu.weight(j) * density.values(i, j);
      transport += mass * cost(i, j);
      kl += mass * std::log(std::max(density.values(i, j), floor));
    }
  }
  CostEstimate est;
  est.dual = report.dual_value;
  est.primal = transport + kl / eta;
  if (std::abs(est.primal - est.dual) > 100.0 * tolerance) {
    throw ConvergenceError("primal and dual cost differ by " +
                           std::to_string(std::abs(est.primal - est.dual)));
  }
  return est;
}

double coupling_functional(const CouplingDensity& density, const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu, const PairFunction& phi) {
  if (density.values.rows() != mu.size() || density.values.cols() != nu.size()) {
    throw ValidationError("density shape does not match the measures");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const Vector x = mu.point(i).transpose();
    for (Eigen::Index j = 0; j < nu.size(); ++j) {
      const double value = phi(x, nu.point(j).transpose());
      if (!std::isfinite(value)) throw ValidationError("test function returned a non-finite value");
      total += mu.weight(i) * nu.weight(j) * density.values(i, j) * value;
    }
  }
  return total;
}

}  // namespace eot
