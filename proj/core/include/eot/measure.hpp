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

#ifndef EOT_MEASURE_HPP_
#define EOT_MEASURE_HPP_

#include <cstdint>
#include <span>

#include <Eigen/Core>

namespace eot {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// One point per row; rows are contiguous so a point can be read as a span.
using PointCloud = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Radius of the ball every support point must lie in before solving.
inline constexpr double kSupportRadius = 0.5;
inline constexpr double kSupportSlack = 1e-12;
inline constexpr double kWeightSumTolerance = 1e-12;

// A finitely supported probability measure: atoms (rows of `points`) with
// nonnegative weights summing to one. Duplicate rows are distinct atoms.
class DiscreteMeasure {
 public:
  // Throws ValidationError unless the invariants hold.
  DiscreteMeasure(PointCloud points, Vector weights);

  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }

  const PointCloud& points() const { return points_; }
  const Vector& weights() const { return weights_; }
  double weight(Eigen::Index i) const { return weights_[i]; }
  auto point(Eigen::Index i) const { return points_.row(i); }

 private:
  PointCloud points_;
  Vector weights_;
};

// Affine map x -> (x - center) / scale.
struct NormalizationTransform {
  Vector center;
  double scale = 1.0;
};

// Solver configuration. `eta` multiplies the cost inside the Gibbs kernel,
// i.e. the entropic penalty is (1/eta) KL.
struct Config {
  double eta = 1.0;
  double tolerance = 1e-10;
  int max_iterations = 10000;
  std::uint64_t seed = 0;

  // Throws ValidationError on a non-positive eta/tolerance or max_iterations < 1.
  void validate() const;
};

// True iff every atom has Euclidean norm <= 1/2 (+1e-12).
bool validate_support(const DiscreteMeasure& m);

// Centers on the joint bounding-box midpoint and scales the farthest point
// onto the radius-1/2 sphere. Scale is 1 when every point is the center.
NormalizationTransform fit_normalization(std::span<const DiscreteMeasure> measures);

DiscreteMeasure apply_normalization(const NormalizationTransform& t, const DiscreteMeasure& m);
Vector apply_point(const NormalizationTransform& t, const Eigen::Ref<const Vector>& x);
Vector invert_point(const NormalizationTransform& t, const Eigen::Ref<const Vector>& x);

// Uniform weights 1/n over the rows of `points`.
DiscreteMeasure empirical_from_sample(PointCloud points);

}  // namespace eot

#endif  // EOT_MEASURE_HPP_
