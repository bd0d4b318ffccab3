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

// Acceptance checks 1-8. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "eot/dual_solver.hpp"
#include "eot/experiments.hpp"
#include "eot/extension.hpp"
#include "eot/oracle.hpp"
#include "test_oracles.hpp"

namespace eot {
namespace {

using testing::InstanceGenerator;

constexpr std::uint64_t kRateSeed = 20261014;
const std::vector<int> kRateSizes{50, 100, 200, 400, 800};
constexpr int kRateTrials = 50;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      detail << what << "; ";
      pass = false;
    }
  }
};

bool run_criterion(int id, const char* name, double limit_s,
                   const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.require(elapsed < limit_s, "runtime over " + std::to_string(limit_s) + " s");
  std::printf("%s %d %s (%.2f s): %s\n", out.pass ? "PASS" : "FAIL", id, name, elapsed,
              out.detail.str().c_str());
  std::fflush(stdout);
  return out.pass;
}

void closed_form(Outcome& out) {
  const double a = 0.25;
  const double eta = 1.0;
  const Scenario s = two_atom_scenario(a, eta);
  Config cfg;
  cfg.eta = eta;
  const SolveReport r = sinkhorn_solve(s.mu, s.nu, cfg);
  const PopulationTruth truth = compute_truth(s.mu, s.nu, eta);
  const double c = std::log(2.0 / (1.0 + std::exp(-4.0 * eta * a * a))) / eta;
  const double f_err = (r.potentials.f.array() - c).abs().maxCoeff();
  const double g_err = r.potentials.g.cwiseAbs().maxCoeff();
  const double dual_err = std::abs(r.dual_value - truth.cost);
  out.require(r.converged, "solver converged");
  out.require(f_err <= 1e-8, "f error " + std::to_string(f_err));
  out.require(g_err <= 1e-8, "g error " + std::to_string(g_err));
  out.require(dual_err <= 1e-8, "dual vs oracle " + std::to_string(dual_err));
  out.detail << "f_err=" << f_err << " g_err=" << g_err << " dual_err=" << dual_err;
}

PotentialPair random_s2_pair(InstanceGenerator& gen, const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu) {
  Vector f = gen.vector(mu.size(), -1.9, 1.9);
  Vector g = gen.vector(nu.size(), -0.9, 0.9);
  g.array() -= nu.weights().dot(g);
  return {f, g, true};
}

void structural(Outcome& out) {
  InstanceGenerator gen(2002);
  const double etas[] = {0.5, 1.0, 2.0};
  double worst_marginal = 0.0, worst_sample = 0.0, worst_ext = 0.0, worst_shift = 0.0;
  int pl_fail = 0, sc_fail = 0, eb_fail = 0, env_fail = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const double eta = etas[inst % 3];
    const Eigen::Index d = gen.integer(1, 3);
    const DiscreteMeasure mu = gen.measure(gen.integer(1, 50), d, inst % 2 == 1);
    const DiscreteMeasure nu = gen.measure(gen.integer(1, 50), d, inst % 2 == 1);
    Config cfg;
    cfg.eta = eta;
    const SolveReport r = sinkhorn_solve(mu, nu, cfg);
    out.require(r.converged, "instance " + std::to_string(inst) + " converged");
    worst_marginal =
        std::max(worst_marginal, testing::max_marginal_violation(mu, nu, r.potentials, eta));
    worst_sample = std::max({worst_sample, r.potentials.f.lpNorm<Eigen::Infinity>(),
                             r.potentials.g.lpNorm<Eigen::Infinity>()});

    const ExtendedPotentials ext(mu, nu, r.potentials, eta);
    const double lo = std::exp(-5 * eta);
    const double hi = std::exp(5 * eta);
    for (int q = 0; q < 1000; ++q) {
      const Vector x = gen.ball_point(d);
      const Vector y = gen.ball_point(d);
      worst_ext = std::max({worst_ext, std::abs(ext.f(x)), std::abs(ext.g(y))});
      const double p = ext.density(x, y);
      if (p < lo || p > hi) ++env_fail;
    }

    const double base = dual_objective(mu, nu, r.potentials, eta);
    for (double c : {-10.0, -0.37, 0.37, 10.0}) {
      const PotentialPair shifted{r.potentials.f.array() + c, r.potentials.g.array() - c, false};
      worst_shift = std::max(worst_shift, std::abs(dual_objective(mu, nu, shifted, eta) - base));
    }

    const PopulationTruth truth = compute_truth(mu, nu, eta);
    for (int k = 0; k < 100; ++k) {
      const PotentialPair p = random_s2_pair(gen, mu, nu);
      const PotentialPair q = random_s2_pair(gen, mu, nu);
      if (!pl_gap_certificate(mu, nu, p, r.potentials, eta, 2.0).holds(1e-12)) ++pl_fail;
      if (!strong_concavity_certificate(mu, nu, p, q, eta, 2.0).holds(1e-12)) ++sc_fail;
      if (!error_bound_certificate(mu, nu, p, truth.potentials, eta, 2.0).holds()) ++eb_fail;
    }
  }
  out.require(worst_marginal <= 1e-6, "marginal violation " + std::to_string(worst_marginal));
  out.require(worst_sample <= 1 + 1e-6, "sample potential sup " + std::to_string(worst_sample));
  out.require(worst_ext <= 2 + 1e-6, "extended potential sup " + std::to_string(worst_ext));
  out.require(env_fail == 0, std::to_string(env_fail) + " density envelope violations");
  out.require(worst_shift <= 1e-12, "translation drift " + std::to_string(worst_shift));
  out.require(pl_fail == 0, std::to_string(pl_fail) + " PL failures");
  out.require(sc_fail == 0, std::to_string(sc_fail) + " strong concavity failures");
  out.require(eb_fail == 0, std::to_string(eb_fail) + " error bound failures");
  out.detail << "marginal=" << worst_marginal << " sample_sup=" << worst_sample
             << " ext_sup=" << worst_ext << " shift=" << worst_shift;
}

void cross_oracle(Outcome& out) {
  InstanceGenerator gen(3003);
  double worst = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const Eigen::Index d = gen.integer(1, 4);
    const DiscreteMeasure mu = gen.measure(gen.integer(1, 40), d, true);
    const DiscreteMeasure nu = gen.measure(gen.integer(1, 40), d, true);
    Config cfg;
    cfg.eta = gen.real(0.5, 2.0);
    const SolveReport r = sinkhorn_solve(mu, nu, cfg);
    out.require(r.converged, "instance " + std::to_string(inst) + " converged");
    const PopulationTruth t = compute_truth(mu, nu, cfg.eta);
    worst = std::max({worst, (r.potentials.f - t.potentials.f).lpNorm<Eigen::Infinity>(),
                      (r.potentials.g - t.potentials.g).lpNorm<Eigen::Infinity>()});
  }
  out.require(worst <= 1e-8, "sup difference " + std::to_string(worst));
  out.detail << "sup_diff=" << worst;
}

ExperimentSpec rate_spec() {
  ExperimentSpec spec;
  spec.sample_sizes = kRateSizes;
  spec.trials = kRateTrials;
  spec.seed = kRateSeed;
  spec.eta = 1.0;
  return spec;
}

// Shared between criteria 4 and 5; both read the same trials.
const std::vector<RateCurve>& default_curves() {
  static const std::vector<RateCurve> curves = [] {
    const Scenario s = default_scenario();
    const PopulationTruth truth = compute_truth(s.mu, s.nu, s.eta);
    const std::vector<Metric> metrics{Metric::kCostMse, Metric::kMapMse, Metric::kDensityMse,
                                      Metric::kCouplingFluct, Metric::kCostBias};
    return run_curves(truth, std::nullopt, metrics, rate_spec());
  }();
  return curves;
}

void check_slope(Outcome& out, const RateCurve& c, double lo, double hi) {
  const std::string name(metric_name(c.metric));
  out.require(c.valid, name + " curve valid");
  out.require(c.slope_fitted, name + " slope fitted");
  out.require(c.fitted_slope >= lo && c.fitted_slope <= hi,
              name + " slope " + std::to_string(c.fitted_slope));
  out.detail << name << "=" << c.fitted_slope << " ";
}

void rates(Outcome& out) {
  const auto& curves = default_curves();
  check_slope(out, curves[0], -1.35, -0.65);
  check_slope(out, curves[1], -1.35, -0.65);
  check_slope(out, curves[2], -1.35, -0.65);
  check_slope(out, curves[3], -0.70, -0.30);
}

void bias(Outcome& out) {
  const RateCurve& c = default_curves()[4];
  for (const auto& s : c.sizes) {
    out.require(s.mean >= -3.0 * s.std_error,
                "n=" + std::to_string(s.n) + " mean " + std::to_string(s.mean));
    out.detail << "n=" << s.n << ":" << s.mean / s.std_error << "se ";
  }
}

void gradient_variance(Outcome& out) {
  const Scenario s = default_scenario();
  const PopulationTruth truth = compute_truth(s.mu, s.nu, s.eta);
  for (int n : {100, 400}) {
    const TailReport r = concentration_check(truth, n, 2000, kRateSeed);
    out.require(r.variance_identity_holds(),
                "n=" + std::to_string(n) + " n*E|grad|^2 " + std::to_string(r.scaled_mean) +
                    " vs 2Var " + std::to_string(r.variance_identity));
    out.require(r.gradient_mean_within_bound(), "n=" + std::to_string(n) + " above 2e^{10}/n");
    out.detail << "n=" << n << ": " << r.scaled_mean << " vs " << r.variance_identity << " (se "
               << r.scaled_std_error << ") ";
  }
}

void transfer(Outcome& out) {
  const Scenario reg = regression_scenario();
  const PopulationTruth reg_truth = compute_truth(reg.mu, reg.nu, reg.eta);
  ExperimentSpec spec = rate_spec();
  spec.metric = Metric::kTransferMse;
  check_slope(out, run_curve(reg_truth, reg.label_model, spec), -1.35, -0.65);

  const Scenario margin = margin_scenario();
  const PopulationTruth margin_truth = compute_truth(margin.mu, margin.nu, margin.eta);
  spec.metric = Metric::kExcessRisk;
  const RateCurve risk = run_curve(margin_truth, margin.label_model, spec);
  out.require(risk.valid && risk.slope_fitted, "excess risk slope fitted");
  out.require(risk.fitted_slope <= -0.6, "excess risk slope " + std::to_string(risk.fitted_slope));
  out.detail << "excess_risk=" << risk.fitted_slope;
}

void gradient_fd(Outcome& out) {
  InstanceGenerator gen(8008);
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const Eigen::Index d = gen.integer(1, 3);
    const DiscreteMeasure mu = gen.measure(gen.integer(1, 15), d, true);
    const DiscreteMeasure nu = gen.measure(gen.integer(1, 15), d, true);
    const double eta = gen.real(0.5, 2.0);
    PotentialPair fg{gen.vector(mu.size(), -1, 1), gen.vector(nu.size(), -1, 1), false};
    const DualGradient grad = dual_gradient(mu, nu, fg, eta);
    const double h = 1e-5;
    double diff_sq = 0.0, ref_sq = 0.0;
    auto probe = [&](Vector& v, Eigen::Index i, double analytic) {
      const double saved = v[i];
      v[i] = saved + h;
      const double up = dual_objective(mu, nu, fg, eta);
      v[i] = saved - h;
      const double down = dual_objective(mu, nu, fg, eta);
      v[i] = saved;
      const double numeric = (up - down) / (2 * h);
      diff_sq += (numeric - analytic) * (numeric - analytic);
      ref_sq += numeric * numeric;
    };
    for (Eigen::Index i = 0; i < mu.size(); ++i) probe(fg.f, i, grad.f[i]);
    for (Eigen::Index j = 0; j < nu.size(); ++j) probe(fg.g, j, grad.g[j]);
    worst = std::max(worst, std::sqrt(diff_sq / ref_sq));
  }
  out.require(worst <= 1e-6, "relative error " + std::to_string(worst));
  out.detail << "max_rel_err=" << worst;
}

}  // namespace
}  // namespace eot

int main() {
  using eot::run_criterion;
  bool ok = true;
  ok &= run_criterion(1, "closed-form exactness", 1.0, eot::closed_form);
  ok &= run_criterion(2, "structural invariants", 120.0, eot::structural);
  ok &= run_criterion(3, "cross-implementation oracle", 60.0, eot::cross_oracle);
  ok &= run_criterion(4, "rate reproduction", 900.0, eot::rates);
  ok &= run_criterion(5, "non-negative bias", 900.0, eot::bias);
  ok &= run_criterion(6, "gradient-variance identity", 600.0, eot::gradient_variance);
  ok &= run_criterion(7, "transfer rates", 600.0, eot::transfer);
  ok &= run_criterion(8, "gradient correctness", 60.0, eot::gradient_fd);
  return ok ? 0 : 1;
}
