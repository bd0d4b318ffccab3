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

#ifndef EOT_IO_HPP_
#define EOT_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "eot/dual_solver.hpp"
#include "eot/experiments.hpp"
#include "eot/measure.hpp"

// File formats. Every reader throws ValidationError on malformed input.
// Numbers are written with 17 significant digits.
namespace eot::io {

// Point clouds: one row per point, d numeric columns. A header row is
// detected by a non-numeric first row; if its last column is named `weight`
// that column holds the atom weights, otherwise weights are uniform.
DiscreteMeasure read_point_csv(const std::filesystem::path& path);
DiscreteMeasure parse_point_csv(std::istream& in, const std::string& source = "<stream>");
PointCloud read_points(const std::filesystem::path& path);
void write_point_csv(const std::filesystem::path& path, const DiscreteMeasure& m);
void write_points(const std::filesystem::path& path, const PointCloud& pts);

// Labels: one value per row, optional header `label`.
Vector read_labels_csv(const std::filesystem::path& path);

// Dense matrix, no header.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& values);

// {"center": [...], "scale": s}
NormalizationTransform read_transform(const std::filesystem::path& path);
void write_transform(const std::filesystem::path& path, const NormalizationTransform& t);

// {"f": [...], "g": [...], "dual_value", "gradient_norm", "iterations",
//  "converged"} plus provenance fields "eta" and "tolerance".
struct StoredReport {
  SolveReport report;
  double eta = 1.0;
  double tolerance = 0.0;
};
StoredReport read_report(const std::filesystem::path& path);
void write_report(const std::filesystem::path& path, const SolveReport& report, double eta,
                  double tolerance);
std::string report_json(const SolveReport& report, double eta, double tolerance);

// {"mu_points", "mu_weights", "nu_points", "nu_weights", "eta",
//  optional "label_model": {"kind": "regression"|"classification",
//  "values": [...], "noise", "alpha", "c0"}}
Scenario read_scenario(const std::filesystem::path& path);
void write_scenario(const std::filesystem::path& path, const Scenario& s);

// {"scenario", "metric", "sample_sizes", "trials", "seed", "eta",
//  "tolerance", "max_iterations"}; a relative scenario path is resolved
// against the experiment file's directory.
ExperimentSpec read_experiment_spec(const std::filesystem::path& path);

// Columns n, trials_ok, trials_failed, mean, mse, q50, q90, q99.
void write_curve_csv(const std::filesystem::path& path, const RateCurve& curve);
void write_curve_sidecar(const std::filesystem::path& path, const RateCurve& curve,
                         const ExperimentSpec& spec);

// Columns quantity, t, level, empirical, bound, holds.
void write_tails_csv(const std::filesystem::path& path, const TailReport& report);

std::string format_double(double v);

}  // namespace eot::io

#endif  // EOT_IO_HPP_
