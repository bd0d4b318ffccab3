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

#include "cli.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eot/dual_solver.hpp"
#include "eot/errors.hpp"
#include "eot/experiments.hpp"
#include "eot/extension.hpp"
#include "eot/io.hpp"
#include "eot/measure.hpp"
#include "eot/oracle.hpp"
#include "eot/transfer.hpp"

namespace eot::cli {
namespace {

namespace fs = std::filesystem;

// Number of points outside the support ball. They are still evaluated.
int count_outside(const PointCloud& pts) {
  int outside = 0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    if (pts.row(i).norm() > kSupportRadius + kSupportSlack) ++outside;
  }
  return outside;
}

void warn_outside(const PointCloud& pts, std::ostream& err) {
  const int outside = count_outside(pts);
  if (outside > 0) {
    err << "warning: " << outside << " query point(s) lie outside the radius-1/2 ball; "
        << "extension bounds do not apply there\n";
  }
}

void require_converged(const io::StoredReport& stored, const std::string& path) {
  if (!stored.report.converged) {
    throw ConvergenceError(path + ": report did not converge");
  }
  if (!(stored.eta > 0.0)) throw ValidationError(path + ": report has no positive eta");
}

fs::path sidecar_path(const fs::path& out) {
  fs::path p = out;
  if (p.extension() == ".json") return p.replace_extension(".meta.json");
  return p.replace_extension(".json");
}

struct SolveArgs {
  std::string mu, nu, out;
  double eta = 0.0;
  double tol = 1e-10;
  int max_iter = 10000;
};

struct NormalizeArgs {
  std::string mu, nu, mu_out, nu_out, transform;
};

struct MapArgs {
  std::string report, nu, query, out, transform;
};

struct DensityArgs {
  std::string report, mu, nu, out;
};

struct TransferArgs {
  std::string report, nu, labels, query, mode, out;
};

struct RatesArgs {
  std::string spec, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<double> eta;
  int threads = 0;
};

struct ConcentrationArgs {
  std::string scenario, out;
  int n = 200;
  int trials = 500;
  std::uint64_t seed = 0;
  std::optional<double> eta;
  int threads = 0;
};

struct ScenarioArgs {
  std::string preset, out;
};

int do_normalize(const NormalizeArgs& a, std::ostream& out) {
  const DiscreteMeasure mu = io::read_point_csv(a.mu);
  const DiscreteMeasure nu = io::read_point_csv(a.nu);
  if (mu.dim() != nu.dim()) throw ValidationError("mu and nu have different dimensions");
  const std::vector<DiscreteMeasure> both{mu, nu};
  const NormalizationTransform t = fit_normalization(both);
  io::write_point_csv(a.mu_out, apply_normalization(t, mu));
  io::write_point_csv(a.nu_out, apply_normalization(t, nu));
  io::write_transform(a.transform, t);
  out << "scale " << io::format_double(t.scale) << '\n';
  return kOk;
}

int do_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const DiscreteMeasure mu = io::read_point_csv(a.mu);
  const DiscreteMeasure nu = io::read_point_csv(a.nu);
  Config cfg;
  cfg.eta = a.eta;
  cfg.tolerance = a.tol;
  cfg.max_iterations = a.max_iter;
  const SolveReport report = sinkhorn_solve(mu, nu, cfg);
  io::write_report(a.out, report, cfg.eta, cfg.tolerance);
  out << "dual_value " << io::format_double(report.dual_value) << '\n'
      << "iterations " << report.iterations << '\n';
  if (!report.converged) {
    err << "gradient norm " << io::format_double(report.gradient_norm) << " after "
        << report.iterations << " iterations\n";
    throw ConvergenceError("solver did not reach tolerance " + io::format_double(a.tol));
  }
  return kOk;
}

int do_map(const MapArgs& a, std::ostream& err) {
  const io::StoredReport stored = io::read_report(a.report);
  require_converged(stored, a.report);
  const DiscreteMeasure nu = io::read_point_csv(a.nu);
  PointCloud query = io::read_points(a.query);
  if (query.cols() != nu.dim()) throw ValidationError("query and nu dimensions differ");
  std::optional<NormalizationTransform> transform;
  if (!a.transform.empty()) {
    transform = io::read_transform(a.transform);
    if (transform->center.size() != nu.dim()) {
      throw ValidationError("transform and nu dimensions differ");
    }
    for (Eigen::Index i = 0; i < query.rows(); ++i) {
      query.row(i) = apply_point(*transform, query.row(i).transpose()).transpose();
    }
  }
  warn_outside(query, err);
  const ExtendedPotentials ext(std::nullopt, nu, stored.report.potentials, stored.eta);
  PointCloud mapped(query.rows(), query.cols());
  for (Eigen::Index i = 0; i < query.rows(); ++i) {
    Vector b = ext.map(query.row(i).transpose());
    if (transform) b = invert_point(*transform, b);
    mapped.row(i) = b.transpose();
  }
  io::write_points(a.out, mapped);
  return kOk;
}

int do_density(const DensityArgs& a) {
  const io::StoredReport stored = io::read_report(a.report);
  require_converged(stored, a.report);
  const DiscreteMeasure mu = io::read_point_csv(a.mu);
  const DiscreteMeasure nu = io::read_point_csv(a.nu);
  const CouplingDensity density = coupling_density(mu, nu, stored.report.potentials, stored.eta);
  io::write_matrix_csv(a.out, density.values);
  return kOk;
}

int do_transfer(const TransferArgs& a, std::ostream& err) {
  const io::StoredReport stored = io::read_report(a.report);
  require_converged(stored, a.report);
  const DiscreteMeasure nu = io::read_point_csv(a.nu);
  const LabeledSample labeled{nu.points(), io::read_labels_csv(a.labels)};
  const PointCloud query = io::read_points(a.query);
  if (query.cols() != nu.dim()) throw ValidationError("query and nu dimensions differ");
  warn_outside(query, err);
  const ExtendedPotentials ext(std::nullopt, nu, stored.report.potentials, stored.eta);
  Matrix pred(query.rows(), 1);
  for (Eigen::Index i = 0; i < query.rows(); ++i) {
    const Vector x = query.row(i).transpose();
    pred(i, 0) = a.mode == "classify" ? plugin_classifier(ext, labeled, x)
                                      : plugin_regression(ext, labeled, x);
  }
  io::write_matrix_csv(a.out, pred);
  return kOk;
}

int do_rates(const RatesArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentSpec spec = io::read_experiment_spec(a.spec);
  if (a.seed) spec.seed = *a.seed;
  if (a.trials) spec.trials = *a.trials;
  if (a.eta) spec.eta = *a.eta;
  spec.threads = a.threads;
  spec.validate();
  const Scenario scenario = io::read_scenario(spec.scenario_path);
  const PopulationTruth truth = compute_truth(scenario.mu, scenario.nu, spec.eta);
  const RateCurve curve = run_curve(truth, scenario.label_model, spec);
  for (const auto& s : curve.sizes) {
    err << "n=" << s.n << " ok=" << s.trials_ok << " failed=" << s.trials_failed
        << " mean=" << io::format_double(s.mean) << '\n';
  }
  io::write_curve_csv(a.out, curve);
  io::write_curve_sidecar(sidecar_path(a.out), curve, spec);
  if (curve.slope_fitted) {
    out << "slope " << io::format_double(curve.fitted_slope) << '\n';
  } else {
    out << "slope skipped" << (curve.degenerate ? " (degenerate curve)" : "") << '\n';
  }
  if (!curve.valid) err << "warning: more than 1% of trials failed; curve marked invalid\n";
  return kOk;
}

int do_concentration(const ConcentrationArgs& a, std::ostream& out) {
  const Scenario scenario = io::read_scenario(a.scenario);
  const double eta = a.eta.value_or(scenario.eta);
  const PopulationTruth truth = compute_truth(scenario.mu, scenario.nu, eta);
  const TailReport report = concentration_check(truth, a.n, a.trials, a.seed, a.threads);
  io::write_tails_csv(a.out, report);
  out << "gradient_sq_mean " << io::format_double(report.gradient_sq_mean) << " bound "
      << io::format_double(report.gradient_sq_bound) << '\n';
  return kOk;
}

int do_scenario(const ScenarioArgs& a) {
  static const std::map<std::string, std::function<Scenario()>> presets{
      {"default", [] { return default_scenario(); }},
      {"regression", [] { return regression_scenario(); }},
      {"margin", [] { return margin_scenario(); }},
      {"two-atom", [] { return two_atom_scenario(); }},
  };
  io::write_scenario(a.out, presets.at(a.preset)());
  return kOk;
}

int fail(std::ostream& err, int code, const std::string& message) {
  err << "ERROR " << code << ": " << message << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropic optimal transport estimators", "eot"};
  app.require_subcommand(1);

  NormalizeArgs norm;
  auto* normalize = app.add_subcommand("normalize", "Rescale mu and nu into the radius-1/2 ball");
  normalize->add_option("--mu", norm.mu, "mu point CSV")->required();
  normalize->add_option("--nu", norm.nu, "nu point CSV")->required();
  normalize->add_option("--mu-out", norm.mu_out, "normalized mu CSV")->required();
  normalize->add_option("--nu-out", norm.nu_out, "normalized nu CSV")->required();
  normalize->add_option("--transform", norm.transform, "transform JSON to write")->required();

  SolveArgs sol;
  auto* solve = app.add_subcommand("solve", "Solve the empirical entropic dual");
  solve->add_option("--mu", sol.mu, "mu point CSV")->required();
  solve->add_option("--nu", sol.nu, "nu point CSV")->required();
  solve->add_option("--eta", sol.eta, "inverse regularization")->required();
  solve->add_option("--tol", sol.tol, "gradient-norm tolerance")->capture_default_str();
  solve->add_option("--max-iter", sol.max_iter, "iteration cap")->capture_default_str();
  solve->add_option("--out", sol.out, "report JSON")->required();

  MapArgs mp;
  auto* map = app.add_subcommand("map", "Evaluate the entropic map at query points");
  map->add_option("--report", mp.report, "report JSON")->required();
  map->add_option("--nu", mp.nu, "nu point CSV the report was solved on")->required();
  map->add_option("--query", mp.query, "query point CSV")->required();
  map->add_option("--transform", mp.transform, "transform JSON; queries and output in original "
                                               "coordinates");
  map->add_option("--out", mp.out, "mapped points CSV")->required();

  DensityArgs dn;
  auto* density = app.add_subcommand("density", "Coupling density on the sample atoms");
  density->add_option("--report", dn.report, "report JSON")->required();
  density->add_option("--mu", dn.mu, "mu point CSV")->required();
  density->add_option("--nu", dn.nu, "nu point CSV")->required();
  density->add_option("--out", dn.out, "density matrix CSV")->required();

  TransferArgs tr;
  auto* transfer = app.add_subcommand("transfer", "Plug-in regression or classification");
  transfer->add_option("--report", tr.report, "report JSON")->required();
  transfer->add_option("--nu", tr.nu, "nu point CSV")->required();
  transfer->add_option("--labels", tr.labels, "labels CSV aligned with nu")->required();
  transfer->add_option("--query", tr.query, "query point CSV")->required();
  transfer->add_option("--mode", tr.mode, "regress or classify")
      ->required()
      ->check(CLI::IsMember({"regress", "classify"}));
  transfer->add_option("--out", tr.out, "prediction CSV")->required();

  RatesArgs rt;
  auto* rates = app.add_subcommand("rates", "Monte Carlo rate curve for one metric");
  rates->add_option("--spec", rt.spec, "experiment spec JSON")->required();
  rates->add_option("--out", rt.out, "curve CSV; a JSON sidecar is written next to it")
      ->required();
  rates->add_option("--seed", rt.seed, "override the experiment seed");
  rates->add_option("--trials", rt.trials, "override the experiment trial count");
  rates->add_option("--eta", rt.eta, "override the experiment eta");
  rates->add_option("--threads", rt.threads, "worker threads, 0 for all cores")
      ->check(CLI::NonNegativeNumber);

  ConcentrationArgs cc;
  auto* conc = app.add_subcommand("concentration", "Tail checks at the population potentials");
  conc->add_option("--scenario", cc.scenario, "scenario JSON")->required();
  conc->add_option("--n", cc.n, "sample size")->capture_default_str()->check(CLI::PositiveNumber);
  conc->add_option("--trials", cc.trials, "trial count")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  conc->add_option("--seed", cc.seed, "64-bit seed")->capture_default_str();
  conc->add_option("--eta", cc.eta, "override the scenario eta");
  conc->add_option("--threads", cc.threads, "worker threads, 0 for all cores")
      ->check(CLI::NonNegativeNumber);
  conc->add_option("--out", cc.out, "tails CSV")->required();

  ScenarioArgs sc;
  auto* scenario = app.add_subcommand("scenario", "Write a built-in scenario JSON");
  scenario->add_option("--preset", sc.preset, "default, regression, margin or two-atom")
      ->required()
      ->check(CLI::IsMember({"default", "regression", "margin", "two-atom"}));
  scenario->add_option("--out", sc.out, "scenario JSON")->required();

  std::vector<const char*> argv{"eot"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << app.help();
    return fail(err, kUsage, e.what());
  }

  try {
    if (*normalize) return do_normalize(norm, out);
    if (*solve) return do_solve(sol, out, err);
    if (*map) return do_map(mp, err);
    if (*density) return do_density(dn);
    if (*transfer) return do_transfer(tr, err);
    if (*rates) return do_rates(rt, out, err);
    if (*conc) return do_concentration(cc, out);
    if (*scenario) return do_scenario(sc);
  } catch (const ConvergenceError& e) {
    return fail(err, kNotConverged, e.what());
  } catch (const ValidationError& e) {
    return fail(err, kData, e.what());
  } catch (const std::exception& e) {
    return fail(err, kData, e.what());
  }
  return fail(err, kUsage, "no subcommand");
}

}  // namespace eot::cli
