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

#include "eot/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eot/errors.hpp"

namespace eot {

void LabeledSample::validate() const {
  if (y_points.rows() != labels.size()) {
    throw ValidationError("labels (" + std::to_string(labels.size()) + ") and points (" +
                          std::to_string(y_points.rows()) + ") differ in length");
  }
  for (Eigen::Index j = 0; j < labels.size(); ++j) {
    if (!std::isfinite(labels[j]) || std::abs(labels[j]) > 1.0) {
      throw ValidationError("labels must lie in [-1, 1]");
    }
  }
}

void MarginScenario::validate() const {
  for (Eigen::Index j = 0; j < class_probabilities.size(); ++j) {
    const double p = class_probabilities[j];
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("class probabilities must lie in [0, 1]");
  }
  if (!(alpha >= 0.0)) throw ValidationError("margin exponent must be nonnegative");
  if (!(c0 > 0.0)) throw ValidationError("margin constant must be positive");
}

namespace {

void check_alignment(const ExtendedPotentials& ext, const LabeledSample& labeled) {
  labeled.validate();
  const auto& support = ext.nu().points();
  if (labeled.y_points.rows() != support.rows() || labeled.y_points.cols() != support.cols() ||
      labeled.y_points != support) {
    throw ValidationError("labeled points are not the sample the potentials were solved on");
  }
}

}  // namespace

double plugin_regression(const ExtendedPotentials& ext, const LabeledSample& labeled,
                         const Eigen::Ref<const Vector>& x) {
  check_alignment(ext, labeled);
  return ext.conditional_weights(x).dot(labeled.labels);
}

double regression_stationarity_residual(const ExtendedPotentials& ext,
                                        const LabeledSample& labeled) {
  check_alignment(ext, labeled);
  const DiscreteMeasure& mu = ext.mu();
  const CouplingDensity density =
      coupling_density(mu, ext.nu(), ext.potentials(), ext.eta());
  const Vector& w = ext.nu().weights();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double h = plugin_regression(ext, labeled, mu.point(i).transpose());
    double r = 0.0;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      r += w[j] * density.values(i, j) * (h - labeled.labels[j]);
    }
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

int plugin_classifier(const ExtendedPotentials& ext, const LabeledSample& labeled,
                      const Eigen::Ref<const Vector>& x) {
  for (Eigen::Index j = 0; j < labeled.labels.size(); ++j) {
    if (labeled.labels[j] != 0.0 && labeled.labels[j] != 1.0) {
      throw ValidationError("classification labels must be 0 or 1");
    }
  }
  return plugin_regression(ext, labeled, x) > 0.5 ? 1 : 0;
}

std::vector<int> bayes_decisions(const Vector& h_star) {
  std::vector<int> out(static_cast<std::size_t>(h_star.size()));
  for (Eigen::Index i = 0; i < h_star.size(); ++i) {
    out[static_cast<std::size_t>(i)] = h_star[i] > 0.5 ? 1 : 0;
  }
  return out;
}

double excess_risk(const PopulationTruth& truth, const MarginScenario& scenario,
                   const std::vector<int>& decisions) {
  scenario.validate();
  if (scenario.class_probabilities.size() != truth.nu.size()) {
    throw ValidationError("label scenario must give one class probability per nu atom");
  }
  if (static_cast<Eigen::Index>(decisions.size()) != truth.mu.size()) {
    throw ValidationError("need one decision per mu atom");
  }
  const Vector h_star = truth_regression(truth, scenario.class_probabilities);
  const std::vector<int> bayes = bayes_decisions(h_star);
  double risk = 0.0;
  for (Eigen::Index i = 0; i < truth.mu.size(); ++i) {
    const auto s = static_cast<std::size_t>(i);
    if (decisions[s] != bayes[s]) risk += truth.mu.weight(i) * std::abs(2.0 * h_star[i] - 1.0);
  }
  return risk;
}

double excess_risk(const PopulationTruth& truth, const MarginScenario& scenario,
                   const std::function<int(const Eigen::Ref<const Vector>&)>& classifier) {
  std::vector<int> decisions(static_cast<std::size_t>(truth.mu.size()));
  for (Eigen::Index i = 0; i < truth.mu.size(); ++i) {
    decisions[static_cast<std::size_t>(i)] = classifier(truth.mu.point(i).transpose());
  }
  return excess_risk(truth, scenario, decisions);
}

double margin_constant(const Vector& h_star, const Vector& weights, double alpha) {
  if (h_star.size() != weights.size()) throw ValidationError("h_star and weights differ in length");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < h_star.size(); ++i) {
    const double eps = std::abs(h_star[i] - 0.5);
    if (eps == 0.0 || eps > 0.5) continue;
    double mass = 0.0;
    for (Eigen::Index k = 0; k < h_star.size(); ++k) {
      const double gap = std::abs(h_star[k] - 0.5);
      if (gap > 0.0 && gap <= eps) mass += weights[k];
    }
    worst = std::max(worst, mass / std::pow(eps, alpha));
  }
  return worst;
}

}  // namespace eot
