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

#include "eot/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>

#include "eot/dual_solver.hpp"
#include "eot/errors.hpp"
#include "eot/extension.hpp"
#include "eot/transfer.hpp"

namespace eot {

namespace {

constexpr std::array<std::pair<Metric, std::string_view>, 7> kMetricNames{{
    {Metric::kCostMse, "cost_mse"},
    {Metric::kCostBias, "cost_bias"},
    {Metric::kMapMse, "map_mse"},
    {Metric::kDensityMse, "density_mse"},
    {Metric::kCouplingFluct, "coupling_fluct"},
    {Metric::kTransferMse, "transfer_mse"},
    {Metric::kExcessRisk, "excess_risk"},
}};

// Runs body(0..count-1) on up to `threads` workers. The first exception is
// rethrown on the calling thread after all workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double first_coordinate_order(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
  return x[0] <= y[0] ? 1.0 : 0.0;
}

Vector draw_labels(const LabelModel& model, const std::vector<Eigen::Index>& y_atoms,
                   RngStream& rng) {
  Vector labels(static_cast<Eigen::Index>(y_atoms.size()));
  for (std::size_t r = 0; r < y_atoms.size(); ++r) {
    const double value = model.values[y_atoms[r]];
    double a = 0.0;
    if (model.kind == LabelModel::Kind::kRegression) {
      a = std::clamp(value + rng.uniform(-model.noise, model.noise), -1.0, 1.0);
    } else {
      a = rng.bernoulli(value) ? 1.0 : 0.0;
    }
    labels[static_cast<Eigen::Index>(r)] = a;
  }
  return labels;
}

Scenario scenario_from_points(PointCloud mu_pts, Vector mu_w, PointCloud nu_pts, Vector nu_w,
                              double eta) {
  return Scenario{DiscreteMeasure(std::move(mu_pts), std::move(mu_w)),
                  DiscreteMeasure(std::move(nu_pts), std::move(nu_w)), eta, std::nullopt};
}

}  // namespace

std::string_view metric_name(Metric metric) {
  for (const auto& [m, name] : kMetricNames) {
    if (m == metric) return name;
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  for (const auto& [m, n] : kMetricNames) {
    if (n == name) return m;
  }
  throw ValidationError("unknown metric '" + std::string(name) + "'");
}

bool metric_needs_labels(Metric metric) {
  return metric == Metric::kTransferMse || metric == Metric::kExcessRisk;
}

void LabelModel::validate(Eigen::Index nu_atoms) const {
  if (values.size() != nu_atoms) {
    throw ValidationError("label model has " + std::to_string(values.size()) +
                          " values for " + std::to_string(nu_atoms) + " nu atoms");
  }
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    const double v = values[j];
    if (kind == Kind::kRegression && !(std::abs(v) <= 1.0)) {
      throw ValidationError("regression label means must lie in [-1, 1]");
    }
    if (kind == Kind::kClassification && !(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("class probabilities must lie in [0, 1]");
    }
  }
  if (!(noise >= 0.0)) throw ValidationError("label noise must be nonnegative");
}

Scenario default_scenario() {
  PointCloud grid(27, 3);
  for (int idx = 0; idx < 27; ++idx) {
    grid(idx, 0) = idx % 3 - 1;
    grid(idx, 1) = (idx / 3) % 3 - 1;
    grid(idx, 2) = idx / 9 - 1;
  }
  grid /= 2.0 * std::sqrt(3.0);
  Vector w(10);
  for (int i = 0; i < 10; ++i) w[i] = (i + 1) / 55.0;
  return scenario_from_points(grid.topRows(10), w, grid.bottomRows(10), w, 1.0);
}

Scenario regression_scenario() {
  Scenario s = default_scenario();
  LabelModel labels;
  labels.kind = LabelModel::Kind::kRegression;
  labels.values.resize(s.nu.size());
  for (Eigen::Index j = 0; j < s.nu.size(); ++j) {
    labels.values[j] = 0.8 * std::sin(1.7 * static_cast<double>(j) + 0.3);
  }
  labels.noise = 0.2;
  s.label_model = labels;
  return s;
}

Scenario margin_scenario() {
  constexpr double kEta = 1.0;
  constexpr int kLevels = 46;
  constexpr double kGapStep = 0.005;
  // mu is symmetric about 0, so g_star(-1/2) = g_star(1/2) and h_star(x) is
  // the logistic function of 2 eta x: |h_star - 1/2| = tanh(eta |x|) / 2.
  PointCloud mu_pts(2 * kLevels, 1);
  for (int k = 0; k < kLevels; ++k) {
    const double x = std::atanh(2.0 * kGapStep * (k + 1)) / kEta;
    mu_pts(2 * k, 0) = x;
    mu_pts(2 * k + 1, 0) = -x;
  }
  PointCloud nu_pts(2, 1);
  nu_pts << -0.5, 0.5;
  Scenario s = scenario_from_points(mu_pts, Vector::Constant(2 * kLevels, 0.5 / kLevels), nu_pts,
                                    Vector::Constant(2, 0.5), kEta);
  LabelModel labels;
  labels.kind = LabelModel::Kind::kClassification;
  labels.values.resize(2);
  labels.values << 0.0, 1.0;
  labels.alpha = 1.0;
  const PopulationTruth truth = compute_truth(s.mu, s.nu, s.eta);
  labels.c0 = margin_constant(truth_regression(truth, labels.values), s.mu.weights(), 1.0);
  s.label_model = labels;
  return s;
}

Scenario two_atom_scenario(double a, double eta) {
  PointCloud pts(2, 1);
  pts << -a, a;
  const Vector w = Vector::Constant(2, 0.5);
  return scenario_from_points(pts, w, pts, w, eta);
}

void ExperimentSpec::validate() const {
  if (sample_sizes.size() < 2) throw ValidationError("need at least two sample sizes");
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    if (sample_sizes[i] < 2) throw ValidationError("sample sizes must be at least 2");
    if (i > 0 && sample_sizes[i] <= sample_sizes[i - 1]) {
      throw ValidationError("sample sizes must be strictly increasing");
    }
  }
  if (trials < 10) throw ValidationError("need at least 10 trials per size");
  Config{eta, tolerance, max_iterations, seed}.validate();
}

TrialOutcome run_trial(const PopulationTruth& truth, const std::optional<LabelModel>& labels,
                       int n, std::span<const Metric> metrics, RngStream& rng, const Config& cfg) {
  if (n < 2) throw ValidationError("trial sample size must be at least 2");
  for (Metric metric : metrics) {
    if (!metric_needs_labels(metric)) continue;
    if (!labels) {
      throw ValidationError(std::string(metric_name(metric)) + " needs a scenario label model");
    }
    const auto want = metric == Metric::kTransferMse ? LabelModel::Kind::kRegression
                                                     : LabelModel::Kind::kClassification;
    if (labels->kind != want) {
      throw ValidationError(std::string(metric_name(metric)) + " needs a " +
                            (want == LabelModel::Kind::kRegression ? "regression"
                                                                   : "classification") +
                            " label model");
    }
  }

  const auto x_atoms = sample_indices(truth.mu, n, rng);
  const auto y_atoms = sample_indices(truth.nu, n, rng);
  Vector sample_labels;
  if (labels) sample_labels = draw_labels(*labels, y_atoms, rng);

  const DiscreteMeasure mu_n = empirical_from_sample(gather_points(truth.mu, x_atoms));
  const DiscreteMeasure nu_n = empirical_from_sample(gather_points(truth.nu, y_atoms));
  const SolveReport report = sinkhorn_solve(mu_n, nu_n, cfg);
  TrialOutcome outcome;
  outcome.iterations = report.iterations;
  if (!report.converged) return outcome;
  outcome.converged = true;

  const ExtendedPotentials ext(mu_n, nu_n, report.potentials, cfg.eta);
  const DiscreteMeasure& mu = truth.mu;
  const DiscreteMeasure& nu = truth.nu;
  for (Metric metric : metrics) {
    double value = 0.0;
    switch (metric) {
      case Metric::kCostMse: {
        const double err = report.dual_value - truth.cost;
        value = err * err;
        break;
      }
      case Metric::kCostBias:
        value = report.dual_value - truth.cost;
        break;
      case Metric::kMapMse:
        for (Eigen::Index i = 0; i < mu.size(); ++i) {
          const Vector diff = ext.map(mu.point(i).transpose()) - truth.map.row(i).transpose();
          value += mu.weight(i) * diff.squaredNorm();
        }
        break;
      case Metric::kDensityMse:
        for (Eigen::Index i = 0; i < mu.size(); ++i) {
          const Vector x = mu.point(i).transpose();
          for (Eigen::Index j = 0; j < nu.size(); ++j) {
            const double diff = ext.density(x, nu.point(j).transpose()) - truth.density.values(i, j);
            value += mu.weight(i) * nu.weight(j) * diff * diff;
          }
        }
        break;
      case Metric::kCouplingFluct: {
        const double empirical = coupling_functional(
            coupling_density(mu_n, nu_n, report.potentials, cfg.eta), mu_n, nu_n,
            first_coordinate_order);
        const double population = coupling_functional(truth.density, mu, nu, first_coordinate_order);
        value = std::abs(empirical - population);
        break;
      }
      case Metric::kTransferMse: {
        const LabeledSample labeled{nu_n.points(), sample_labels};
        const Vector h_star = truth_regression(truth, labels->values);
        for (Eigen::Index i = 0; i < mu.size(); ++i) {
          const double diff = plugin_regression(ext, labeled, mu.point(i).transpose()) - h_star[i];
          value += mu.weight(i) * diff * diff;
        }
        break;
      }
      case Metric::kExcessRisk: {
        const LabeledSample labeled{nu_n.points(), sample_labels};
        const MarginScenario scenario{labels->values, labels->alpha, labels->c0};
        value = excess_risk(truth, scenario, [&](const Eigen::Ref<const Vector>& x) {
          return plugin_classifier(ext, labeled, x);
        });
        break;
      }
    }
    outcome.values.push_back(value);
  }
  return outcome;
}

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("log-log fit needs at least two aligned points");
  }
  const double count = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("log-log fit needs positive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= count;
  my /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw ValidationError("log-log fit needs distinct abscissae");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double empirical_quantile(std::vector<double> values, double level) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const auto count = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(std::clamp(level, 0.0, 1.0) * count));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

SizeStatistics summarize(int n, std::span<const double> values, int failed) {
  SizeStatistics s;
  s.n = n;
  s.trials_ok = static_cast<int>(values.size());
  s.trials_failed = failed;
  if (values.empty()) return s;
  const double count = static_cast<double>(values.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : values) {
    sum += v;
    sum_sq += v * v;
  }
  s.mean = sum / count;
  s.mse = sum_sq / count;
  if (values.size() > 1) {
    double dev = 0.0;
    for (double v : values) dev += (v - s.mean) * (v - s.mean);
    s.std_error = std::sqrt(dev / (count - 1.0) / count);
  }
  const std::vector<double> copy(values.begin(), values.end());
  s.q50 = empirical_quantile(copy, 0.50);
  s.q90 = empirical_quantile(copy, 0.90);
  s.q99 = empirical_quantile(copy, 0.99);
  return s;
}

std::vector<RateCurve> run_curves(const PopulationTruth& truth,
                                  const std::optional<LabelModel>& labels,
                                  std::span<const Metric> metrics, const ExperimentSpec& spec) {
  spec.validate();
  if (metrics.empty()) throw ValidationError("no metrics requested");
  if (labels) labels->validate(truth.nu.size());
  const Config cfg{spec.eta, spec.tolerance, spec.max_iterations, spec.seed};
  const std::size_t sizes = spec.sample_sizes.size();
  const auto trials = static_cast<std::size_t>(spec.trials);
  std::vector<TrialOutcome> outcomes(sizes * trials);
  parallel_for(outcomes.size(), spec.threads, [&](std::size_t task) {
    const std::size_t s = task / trials;
    const std::size_t t = task % trials;
    const int n = spec.sample_sizes[s];
    RngStream rng = RngStream::derive(spec.seed, static_cast<std::uint64_t>(n), t);
    outcomes[task] = run_trial(truth, labels, n, metrics, rng, cfg);
  });

  std::vector<RateCurve> curves(metrics.size());
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    RateCurve& curve = curves[m];
    curve.metric = metrics[m];
    std::vector<double> xs;
    std::vector<double> means;
    for (std::size_t s = 0; s < sizes; ++s) {
      std::vector<double> values;
      int failed = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        const TrialOutcome& o = outcomes[s * trials + t];
        if (o.converged) {
          values.push_back(o.values[m]);
        } else {
          ++failed;
        }
      }
      if (values.empty()) {
        throw ConvergenceError("every trial failed at n = " + std::to_string(spec.sample_sizes[s]));
      }
      curve.sizes.push_back(summarize(spec.sample_sizes[s], values, failed));
      if (failed > 0.01 * static_cast<double>(trials)) curve.valid = false;
      xs.push_back(spec.sample_sizes[s]);
      means.push_back(curve.sizes.back().mean);
    }
    curve.degenerate = std::all_of(means.begin(), means.end(),
                                   [](double v) { return std::abs(v) <= kDegenerateLevel; });
    if (!curve.degenerate && std::all_of(means.begin(), means.end(), [](double v) { return v > 0.0; })) {
      const LogLogFit fit = fit_loglog(xs, means);
      curve.fitted_slope = fit.slope;
      curve.fit_intercept = fit.intercept;
      curve.slope_fitted = true;
    }
  }
  return curves;
}

RateCurve run_curve(const PopulationTruth& truth, const std::optional<LabelModel>& labels,
                    const ExperimentSpec& spec) {
  const Metric metric = spec.metric;
  return run_curves(truth, labels, std::span<const Metric>(&metric, 1), spec).front();
}

bool TailReport::variance_identity_holds() const {
  return std::abs(scaled_mean - variance_identity) <= 3.0 * scaled_std_error;
}

TailReport concentration_check(const PopulationTruth& truth, int n, int trials,
                               std::uint64_t seed, int threads) {
  if (n < 1 || trials < 2) throw ValidationError("concentration check needs n >= 1 and trials >= 2");
  const auto count = static_cast<std::size_t>(trials);
  std::vector<double> grad_sq(count);
  std::vector<double> u_stat(count);
  const Matrix& p_star = truth.density.values;
  parallel_for(count, threads, [&](std::size_t t) {
    RngStream rng = RngStream::derive(seed, static_cast<std::uint64_t>(n), t);
    const auto x_atoms = sample_indices(truth.mu, n, rng);
    const auto y_atoms = sample_indices(truth.nu, n, rng);
    const DiscreteMeasure mu_n = empirical_from_sample(gather_points(truth.mu, x_atoms));
    const DiscreteMeasure nu_n = empirical_from_sample(gather_points(truth.nu, y_atoms));
    PotentialPair at_truth{Vector(n), Vector(n), false};
    for (int r = 0; r < n; ++r) {
      at_truth.f[r] = truth.potentials.f[x_atoms[static_cast<std::size_t>(r)]];
      at_truth.g[r] = truth.potentials.g[y_atoms[static_cast<std::size_t>(r)]];
    }
    grad_sq[t] = dual_gradient(mu_n, nu_n, at_truth, truth.eta).norm_squared;

    Vector x_freq = Vector::Zero(truth.mu.size());
    Vector y_freq = Vector::Zero(truth.nu.size());
    for (auto a : x_atoms) x_freq[a] += 1.0 / n;
    for (auto b : y_atoms) y_freq[b] += 1.0 / n;
    u_stat[t] = x_freq.dot((p_star.array() - 1.0).matrix() * y_freq);
  });

  TailReport report;
  report.n = n;
  report.trials = trials;
  const SizeStatistics g = summarize(n, grad_sq, 0);
  report.gradient_sq_mean = g.mean;
  report.gradient_sq_bound = 2.0 * std::exp(10.0 * truth.eta) / n;
  report.scaled_mean = n * g.mean;
  report.scaled_std_error = n * g.std_error;
  report.variance_identity = 2.0 * density_variance(truth);
  report.a_sup = (p_star.array() - 1.0).abs().maxCoeff();
  std::vector<double> abs_u(count);
  for (std::size_t t = 0; t < count; ++t) abs_u[t] = std::abs(u_stat[t]);
  for (double t : {1.0, 2.0, 3.0}) {
    UStatisticTail tail;
    tail.t = t;
    tail.level = 1.0 - 2.0 * std::exp(-t);
    tail.empirical_quantile = empirical_quantile(abs_u, tail.level);
    tail.bound = std::sqrt(2.0 * t / n) * report.a_sup;
    report.u_statistic.push_back(tail);
  }
  return report;
}

}  // namespace eot
