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

// Reference computations used by the tests. Everything here is written from
// the defining formulas with plain loops and std:: facilities so it shares
// no code path with the library beyond the data types.

#ifndef EOT_TESTS_TEST_ORACLES_HPP_
#define EOT_TESTS_TEST_ORACLES_HPP_

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "eot/dual_solver.hpp"
#include "eot/measure.hpp"

namespace eot::testing {

inline double sq_dist(const DiscreteMeasure& mu, Eigen::Index i, const DiscreteMeasure& nu,
                      Eigen::Index j) {
  double s = 0.0;
  for (Eigen::Index l = 0; l < mu.dim(); ++l) {
    const double d = mu.points()(i, l) - nu.points()(j, l);
    s += d * d;
  }
  return s;
}

// Direct summation of the dual objective, no shifting.
inline double brute_dual(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const std::vector<double>& f, const std::vector<double>& g, double eta) {
  double lin = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) lin += mu.weight(i) * f[i];
  for (Eigen::Index j = 0; j < nu.size(); ++j) lin += nu.weight(j) * g[j];
  double mass = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    for (Eigen::Index j = 0; j < nu.size(); ++j) {
      mass += mu.weight(i) * nu.weight(j) * std::exp(-eta * (sq_dist(mu, i, nu, j) - f[i] - g[j]));
    }
  }
  return lin - mass / eta + 1.0 / eta;
}

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline double brute_dual(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const PotentialPair& fg, double eta) {
  return brute_dual(mu, nu, to_std(fg.f), to_std(fg.g), eta);
}

// Central differences of brute_dual along every coordinate.
struct FiniteDifference {
  std::vector<double> f;
  std::vector<double> g;
};

inline FiniteDifference central_difference(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                           const PotentialPair& fg, double eta, double step) {
  FiniteDifference out;
  std::vector<double> f = to_std(fg.f);
  std::vector<double> g = to_std(fg.g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double saved = f[i];
    f[i] = saved + step;
    const double up = brute_dual(mu, nu, f, g, eta);
    f[i] = saved - step;
    const double down = brute_dual(mu, nu, f, g, eta);
    f[i] = saved;
    out.f.push_back((up - down) / (2.0 * step));
  }
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double saved = g[j];
    g[j] = saved + step;
    const double up = brute_dual(mu, nu, f, g, eta);
    g[j] = saved - step;
    const double down = brute_dual(mu, nu, f, g, eta);
    g[j] = saved;
    out.g.push_back((up - down) / (2.0 * step));
  }
  return out;
}

// Weighted marginal sums of p = exp(-eta (c - f - g)).
inline double max_marginal_violation(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                     const PotentialPair& fg, double eta) {
  double worst = 0.0;
  std::vector<double> col(static_cast<std::size_t>(nu.size()), 0.0);
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < nu.size(); ++j) {
      const double p = std::exp(-eta * (sq_dist(mu, i, nu, j) - fg.f[i] - fg.g[j]));
      row += nu.weight(j) * p;
      col[static_cast<std::size_t>(j)] += mu.weight(i) * p;
    }
    worst = std::max(worst, std::abs(row - 1.0));
  }
  for (double c : col) worst = std::max(worst, std::abs(c - 1.0));
  return worst;
}

// Symmetric two-atom instance {-a, a} vs {-a, a}: g = 0 and every f entry
// equals (1/eta) ln(2 / (1 + exp(-4 eta a^2))).
inline double two_atom_potential(double a, double eta) {
  return std::log(2.0 / (1.0 + std::exp(-4.0 * eta * a * a))) / eta;
}

// Test-side generator, deliberately not eot::RngStream.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(unsigned seed) : engine_(seed) {}

  // Uniform point in the radius-r ball: Gaussian direction, radius r U^{1/d}.
  Vector ball_point(Eigen::Index dim, double radius = kSupportRadius) {
    std::normal_distribution<double> normal;
    Vector v(dim);
    for (Eigen::Index l = 0; l < dim; ++l) v[l] = normal(engine_);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double r = radius * std::pow(unif(engine_), 1.0 / static_cast<double>(dim));
    return v / v.norm() * r;
  }

  DiscreteMeasure measure(Eigen::Index atoms, Eigen::Index dim, bool weighted) {
    PointCloud pts(atoms, dim);
    for (Eigen::Index i = 0; i < atoms; ++i) pts.row(i) = ball_point(dim).transpose();
    Vector w(atoms);
    std::uniform_real_distribution<double> unif(0.2, 1.0);
    for (Eigen::Index i = 0; i < atoms; ++i) w[i] = weighted ? unif(engine_) : 1.0;
    w /= w.sum();
    return DiscreteMeasure(std::move(pts), std::move(w));
  }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  Vector vector(Eigen::Index size, double lo, double hi) {
    Vector v(size);
    for (Eigen::Index i = 0; i < size; ++i) v[i] = real(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

inline DiscreteMeasure line_measure(std::vector<double> xs, std::vector<double> ws) {
  PointCloud pts(static_cast<Eigen::Index>(xs.size()), 1);
  Vector w(static_cast<Eigen::Index>(ws.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    pts(static_cast<Eigen::Index>(i), 0) = xs[i];
    w[static_cast<Eigen::Index>(i)] = ws[i];
  }
  return DiscreteMeasure(std::move(pts), std::move(w));
}

}  // namespace eot::testing

#endif  // EOT_TESTS_TEST_ORACLES_HPP_
