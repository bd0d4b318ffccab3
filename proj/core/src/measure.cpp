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

#include "eot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "eot/errors.hpp"

namespace eot {

DiscreteMeasure::DiscreteMeasure(PointCloud points, Vector weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.rows() == 0) throw ValidationError("measure has no atoms");
  if (points_.cols() == 0) throw ValidationError("measure points have dimension 0");
  if (weights_.size() != points_.rows()) {
    throw ValidationError("measure has " + std::to_string(points_.rows()) + " points but " +
                          std::to_string(weights_.size()) + " weights");
  }
  if (!points_.allFinite()) throw ValidationError("measure points must be finite");
  double total = 0.0;
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0) {
      throw ValidationError("measure weights must be finite and nonnegative");
    }
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw ValidationError("measure weights sum to " + std::to_string(total) + ", expected 1");
  }
}

void Config::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be positive");
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  if (max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
}

bool validate_support(const DiscreteMeasure& m) {
  const auto& pts = m.points();
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    if (pts.row(i).norm() > kSupportRadius + kSupportSlack) return false;
  }
  return true;
}

NormalizationTransform fit_normalization(std::span<const DiscreteMeasure> measures) {
  if (measures.empty()) throw ValidationError("fit_normalization needs at least one measure");
  const Eigen::Index d = measures.front().dim();
  Vector lo = Vector::Constant(d, std::numeric_limits<double>::infinity());
  Vector hi = Vector::Constant(d, -std::numeric_limits<double>::infinity());
  for (const auto& m : measures) {
    if (m.dim() != d) throw ValidationError("dimension mismatch across measures");
    lo = lo.cwiseMin(m.points().colwise().minCoeff().transpose());
    hi = hi.cwiseMax(m.points().colwise().maxCoeff().transpose());
  }
  NormalizationTransform t;
  t.center = 0.5 * (lo + hi);
  double radius = 0.0;
  for (const auto& m : measures) {
    const auto& pts = m.points();
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      radius = std::max(radius, (pts.row(i).transpose() - t.center).norm());
    }
  }
  t.scale = radius > 0.0 ? radius / kSupportRadius : 1.0;
  return t;
}

namespace {

void check_transform(const NormalizationTransform& t, Eigen::Index d) {
  if (!(t.scale > 0.0) || !std::isfinite(t.scale)) {
    throw ValidationError("normalization scale must be positive");
  }
  if (t.center.size() != d) {
    throw ValidationError("normalization center has dimension " + std::to_string(t.center.size()) +
                          ", data has " + std::to_string(d));
  }
}

}  // namespace

DiscreteMeasure apply_normalization(const NormalizationTransform& t, const DiscreteMeasure& m) {
  check_transform(t, m.dim());
  PointCloud pts = (m.points().rowwise() - t.center.transpose()) / t.scale;
  return DiscreteMeasure(std::move(pts), m.weights());
}

Vector apply_point(const NormalizationTransform& t, const Eigen::Ref<const Vector>& x) {
  check_transform(t, x.size());
  return (x - t.center) / t.scale;
}

Vector invert_point(const NormalizationTransform& t, const Eigen::Ref<const Vector>& x) {
  check_transform(t, x.size());
  return x * t.scale + t.center;
}

DiscreteMeasure empirical_from_sample(PointCloud points) {
  if (points.rows() == 0) throw ValidationError("empirical measure needs at least one point");
  const auto n = points.rows();
  Vector w = Vector::Constant(n, 1.0 / static_cast<double>(n));
  return DiscreteMeasure(std::move(points), std::move(w));
}

}  // namespace eot
