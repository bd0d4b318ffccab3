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

#ifndef EOT_EXPERIMENTS_HPP_
#define EOT_EXPERIMENTS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eot/measure.hpp"
#include "eot/oracle.hpp"
#include "eot/rng.hpp"

namespace eot {

enum class Metric {
  kCostMse,        // |S_n - S|^2
  kCostBias,       // S_n - S
  kMapMse,         // ||b_n - b_star||^2 in L2(mu)
  kDensityMse,     // ||p_n - p_star||^2 in L2(mu x nu)
  kCouplingFluct,  // |(pi_n - pi_star)(phi)|, phi(x, y) = 1[x_1 <= y_1]
  kTransferMse,    // ||h_n - h_star||^2 in L2(mu)
  kExcessRisk,     // excess risk of the plug-in classifier
};

std::string_view metric_name(Metric metric);
// Throws ValidationError for names outside the closed set.
Metric parse_metric(std::string_view name);
bool metric_needs_labels(Metric metric);

// Labels attached to the nu atoms of a scenario.
//  - kRegression: A = clamp(m(y) + U[-noise, noise], -1, 1), m = values.
//  - kClassification: A ~ Bernoulli(values[j]).
struct LabelModel {
  enum class Kind { kRegression, kClassification };
  Kind kind = Kind::kRegression;
  Vector values;
  double noise = 0.0;
  double alpha = 1.0;  // margin exponent the scenario was built for
  double c0 = 1.0;     // margin constant, classification only

  void validate(Eigen::Index nu_atoms) const;
};

// Ground-truth marginals plus optional labels.
struct Scenario {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  double eta = 1.0;
  std::optional<LabelModel> label_model;
};

// 10 + 10 atoms of the grid {-1, 0, 1}^3 scaled into the radius-1/2 ball
// (mu on grid indices 0..9, nu on 17..26), weights proportional to 1..10,
// eta = 1. No labels.
Scenario default_scenario();
// default_scenario() with a bounded regression label model.
Scenario regression_scenario();
// One-dimensional margin scenario for the plug-in classifier: nu = {-1/2, 1/2}
// with deterministic labels 0 / 1 and 92 equally weighted mu atoms at +-x_k,
// placed so that the Bayes regression gaps |h_star - 1/2| are 0.005 k,
// k = 1..46 (alpha = 1).
Scenario margin_scenario();
// Atoms {-a, a} on a line for both marginals, uniform weights.
Scenario two_atom_scenario(double a = 0.25, double eta = 1.0);

struct ExperimentSpec {
  std::string scenario_path;
  Metric metric = Metric::kCostMse;
  std::vector<int> sample_sizes;
  int trials = 50;
  std::uint64_t seed = 0;
  double eta = 1.0;
  double tolerance = 1e-10;
  int max_iterations = 10000;
  int threads = 0;  // 0: hardware concurrency

  // Sizes strictly increasing, at least two of them, each >= 2; trials >= 10.
  void validate() const;
};

// Metric values of one trial; `values` is aligned with the requested
// metrics. A trial whose solve did not converge has converged = false and
// no values.
struct TrialOutcome {
  bool converged = false;
  int iterations = 0;
  std::vector<double> values;
};

// Samples n points from each marginal with `rng` (X atoms, then Y atoms,
// then labels when the scenario has a label model), solves the empirical
// dual and evaluates every requested metric against `truth`.
TrialOutcome run_trial(const PopulationTruth& truth, const std::optional<LabelModel>& labels,
                       int n, std::span<const Metric> metrics, RngStream& rng, const Config& cfg);

struct SizeStatistics {
  int n = 0;
  int trials_ok = 0;
  int trials_failed = 0;
  double mean = 0.0;
  double mse = 0.0;  // mean of squared metric values
  double std_error = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
};

// Means at or below this are round-off of an exactly zero error.
inline constexpr double kDegenerateLevel = 1e-14;

struct RateCurve {
  Metric metric = Metric::kCostMse;
  std::vector<SizeStatistics> sizes;
  double fitted_slope = 0.0;
  double fit_intercept = 0.0;
  bool slope_fitted = false;
  bool degenerate = false;  // |mean| <= kDegenerateLevel at every size
  bool valid = true;        // false when > 1% of trials failed at some size
};

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares of log(y) on log(x). Every y must be positive.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

// Empirical quantile: the sorted value at rank ceil(level * N) (1-based).
double empirical_quantile(std::vector<double> values, double level);

SizeStatistics summarize(int n, std::span<const double> values, int failed);

// Runs one curve per metric over shared trials. Trial (n, t) always uses
// RngStream::derive(seed, n, t) and aggregation is index-ordered, so the
// result does not depend on `threads`.
std::vector<RateCurve> run_curves(const PopulationTruth& truth,
                                  const std::optional<LabelModel>& labels,
                                  std::span<const Metric> metrics, const ExperimentSpec& spec);

RateCurve run_curve(const PopulationTruth& truth, const std::optional<LabelModel>& labels,
                    const ExperimentSpec& spec);

struct UStatisticTail {
  double t = 0.0;
  double level = 0.0;  // 1 - 2 e^{-t}
  double empirical_quantile = 0.0;
  double bound = 0.0;  // sqrt(2 t / n) ||a||_inf
};

struct TailReport {
  int n = 0;
  int trials = 0;
  double gradient_sq_mean = 0.0;   // mean of ||grad Phi_n(f_star, g_star)||_n^2
  double gradient_sq_bound = 0.0;  // 2 e^{10 eta} / n
  double scaled_mean = 0.0;        // n * gradient_sq_mean
  double scaled_std_error = 0.0;
  double variance_identity = 0.0;  // 2 Var(p_star(X, Y))
  double a_sup = 0.0;              // ||p_star - 1||_inf
  std::vector<UStatisticTail> u_statistic;

  bool gradient_mean_within_bound() const { return gradient_sq_mean <= gradient_sq_bound; }
  // |scaled_mean - variance_identity| <= 3 standard errors.
  bool variance_identity_holds() const;
};

// Monte Carlo checks at the population potentials: the gradient norm of the
// empirical objective, and the product-sample average of a = p_star - 1.
TailReport concentration_check(const PopulationTruth& truth, int n, int trials,
                               std::uint64_t seed, int threads = 0);

}  // namespace eot

#endif  // EOT_EXPERIMENTS_HPP_
