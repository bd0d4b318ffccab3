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

#include "eot/oracle.hpp"

#include <cmath>
#include <string>

#include "eot/errors.hpp"

namespace eot {

namespace {

constexpr int kOracleMaxIterations = 1000000;

}  // namespace

PopulationTruth compute_truth(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double eta) {
  if (!(eta > 0.0)) throw ValidationError("eta must be positive");
  if (mu.dim() != nu.dim()) throw ValidationError("measures have different dimensions");
  if (!validate_support(mu) || !validate_support(nu)) {
    throw ValidationError("oracle marginals must lie in the ball of radius 1/2");
  }
  const Eigen::Index m = mu.size();
  const Eigen::Index k = nu.size();
  const Eigen::Index d = mu.dim();
  const Vector& u = mu.weights();
  const Vector& w = nu.weights();

  Matrix cost(m, k);
  Matrix kernel(m, k);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      double c = 0.0;
      for (Eigen::Index l = 0; l < d; ++l) {
        const double diff = mu.points()(i, l) - nu.points()(j, l);
        c += diff * diff;
      }
      cost(i, j) = c;
      kernel(i, j) = std::exp(-eta * c);
    }
  }

  // a = e^{eta f}, b = e^{eta g}; p_ij = a_i K_ij b_j.
  std::vector<double> a(m, 1.0);
  std::vector<double> b(k, 1.0);
  double grad_norm = 0.0;
  int it = 0;
  for (it = 1; it <= kOracleMaxIterations; ++it) {
    for (Eigen::Index i = 0; i < m; ++i) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < k; ++j) s += w[j] * kernel(i, j) * b[j];
      a[i] = 1.0 / s;
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) s += u[i] * kernel(i, j) * a[i];
      b[j] = 1.0 / s;
    }
    double sq = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < k; ++j) row += w[j] * a[i] * kernel(i, j) * b[j];
      sq += u[i] * (1.0 - row) * (1.0 - row);
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      double col = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) col += u[i] * a[i] * kernel(i, j) * b[j];
      sq += w[j] * (1.0 - col) * (1.0 - col);
    }
    grad_norm = std::sqrt(sq);
    if (grad_norm <= kOracleTolerance) break;
  }
  if (grad_norm > kOracleTolerance) {
    throw ConvergenceError("oracle fixed-point iteration stalled at gradient norm " +
                           std::to_string(grad_norm));
  }

  Vector f(m);
  Vector g(k);
  for (Eigen::Index i = 0; i < m; ++i) f[i] = std::log(a[i]) / eta;
  for (Eigen::Index j = 0; j < k; ++j) g[j] = std::log(b[j]) / eta;
  double shift = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) shift += w[j] * g[j];
  for (Eigen::Index i = 0; i < m; ++i) f[i] += shift;
  for (Eigen::Index j = 0; j < k; ++j) g[j] -= shift;

  Matrix p(m, k);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) p(i, j) = std::exp(-eta * (cost(i, j) - f[i] - g[j]));
  }

  double linear = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) linear += u[i] * f[i];
  for (Eigen::Index j = 0; j < k; ++j) linear += w[j] * g[j];
  double mass = 0.0;
  double primal = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double pi = u[i] * w[j] * p(i, j);
      mass += pi;
      primal += pi * (cost(i, j) + std::log(p(i, j)) / eta);
    }
  }
  const double dual = linear - mass / eta + 1.0 / eta;
  if (std::abs(primal - dual) > 1e-10) {
    throw ConvergenceError("oracle primal/dual mismatch " + std::to_string(primal - dual));
  }

  PointCloud map(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    double total = 0.0;
    for (Eigen::Index l = 0; l < d; ++l) map(i, l) = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double weight = w[j] * p(i, j);
      total += weight;
      for (Eigen::Index l = 0; l < d; ++l) map(i, l) += weight * nu.points()(j, l);
    }
    for (Eigen::Index l = 0; l < d; ++l) map(i, l) /= total;
  }

  PotentialPair potentials{std::move(f), std::move(g), true};
  return PopulationTruth{mu,      nu,     std::move(potentials), CouplingDensity{std::move(p)},
                         dual,    primal, std::move(map),        eta,
                         it,      grad_norm};
}

std::vector<Eigen::Index> sample_indices(const DiscreteMeasure& measure, int n, RngStream& rng) {
  if (n < 1) throw ValidationError("sample size must be at least 1");
  const Eigen::Index atoms = measure.size();
  std::vector<double> cdf(static_cast<std::size_t>(atoms));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < atoms; ++i) {
    acc += measure.weight(i);
    cdf[static_cast<std::size_t>(i)] = acc;
  }
  std::vector<Eigen::Index> out(static_cast<std::size_t>(n));
  for (auto& idx : out) {
    const double draw = rng.uniform() * acc;
    Eigen::Index pick = atoms - 1;
    for (Eigen::Index i = 0; i < atoms; ++i) {
      if (draw < cdf[static_cast<std::size_t>(i)]) {
        pick = i;
        break;
      }
    }
    // Never land on a zero-weight tail atom through round-off.
    while (pick > 0 && measure.weight(pick) == 0.0) --pick;
    idx = pick;
  }
  return out;
}

PointCloud gather_points(const DiscreteMeasure& measure, const std::vector<Eigen::Index>& indices) {
  PointCloud pts(static_cast<Eigen::Index>(indices.size()), measure.dim());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    pts.row(static_cast<Eigen::Index>(r)) = measure.point(indices[r]);
  }
  return pts;
}

PointCloud sample_from(const DiscreteMeasure& measure, int n, RngStream& rng) {
  return gather_points(measure, sample_indices(measure, n, rng));
}

Vector truth_regression(const PopulationTruth& truth, const Vector& conditional_mean) {
  if (conditional_mean.size() != truth.nu.size()) {
    throw ValidationError("label model must give one value per nu atom");
  }
  const Vector& w = truth.nu.weights();
  Vector h(truth.mu.size());
  for (Eigen::Index i = 0; i < truth.mu.size(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < truth.nu.size(); ++j) {
      s += w[j] * conditional_mean[j] * truth.density.values(i, j);
    }
    h[i] = s;
  }
  return h;
}

double density_variance(const PopulationTruth& truth) {
  const Vector& u = truth.mu.weights();
  const Vector& w = truth.nu.weights();
  double mean = 0.0;
  double second = 0.0;
  for (Eigen::Index i = 0; i < truth.mu.size(); ++i) {
    for (Eigen::Index j = 0; j < truth.nu.size(); ++j) {
      const double p = truth.density.values(i, j);
      mean += u[i] * w[j] * p;
      second += u[i] * w[j] * p * p;
    }
  }
  return second - mean * mean;
}

}  // namespace eot
