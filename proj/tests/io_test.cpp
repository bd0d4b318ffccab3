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

#include "eot/io.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "eot/errors.hpp"
#include "temp_dir.hpp"
#include "test_oracles.hpp"

namespace eot {
namespace {

using testing::TempDir;
using testing::write_file;

TEST(PointCsvTest, HeaderlessUniform) {
  std::istringstream in("0.1,0.2\n-0.3,0.0\n\n");
  const DiscreteMeasure m = io::parse_point_csv(in);
  EXPECT_EQ(m.size(), 2);
  EXPECT_EQ(m.dim(), 2);
  EXPECT_EQ(m.points()(1, 0), -0.3);
  EXPECT_EQ(m.weights(), Vector::Constant(2, 0.5));
}

TEST(PointCsvTest, HeaderWithWeights) {
  std::istringstream in("x,y,weight\n0.1,0.2,0.25\n0,0,0.75\n");
  const DiscreteMeasure m = io::parse_point_csv(in);
  EXPECT_EQ(m.dim(), 2);
  EXPECT_EQ(m.weight(0), 0.25);
  EXPECT_EQ(m.weight(1), 0.75);
}

TEST(PointCsvTest, HeaderWithoutWeights) {
  std::istringstream in("a,b\n0.1,0.2\n0,0\n0.3,0.1\n");
  const DiscreteMeasure m = io::parse_point_csv(in);
  EXPECT_EQ(m.dim(), 2);
  EXPECT_NEAR(m.weights().sum(), 1.0, 1e-15);
}

TEST(PointCsvTest, Rejections) {
  std::istringstream ragged("0.1,0.2\n0.3\n");
  EXPECT_THROW(io::parse_point_csv(ragged), ValidationError);
  std::istringstream junk("0.1,0.2\n0.3,abc\n");
  EXPECT_THROW(io::parse_point_csv(junk), ValidationError);
  std::istringstream empty("x,weight\n");
  EXPECT_THROW(io::parse_point_csv(empty), ValidationError);
  std::istringstream unnormalized("x,weight\n0.1,0.3\n0.2,0.3\n");
  EXPECT_THROW(io::parse_point_csv(unnormalized), ValidationError);
}

TEST(PointCsvTest, RoundTripIsBitExact) {
  TempDir dir;
  testing::InstanceGenerator gen(401);
  const DiscreteMeasure m = gen.measure(13, 3, true);
  io::write_point_csv(dir / "m.csv", m);
  const DiscreteMeasure back = io::read_point_csv(dir / "m.csv");
  EXPECT_EQ(back.points(), m.points());
  EXPECT_EQ(back.weights(), m.weights());
  io::write_points(dir / "p.csv", m.points());
  EXPECT_EQ(io::read_points(dir / "p.csv"), m.points());
}

TEST(LabelsCsvTest, OptionalHeader) {
  TempDir dir;
  write_file(dir / "a.csv", "label\n1\n0\n-0.5\n");
  write_file(dir / "b.csv", "0.25\n0.5\n");
  write_file(dir / "c.csv", "1,2\n");
  EXPECT_EQ(io::read_labels_csv(dir / "a.csv"), (Vector(3) << 1, 0, -0.5).finished());
  EXPECT_EQ(io::read_labels_csv(dir / "b.csv"), (Vector(2) << 0.25, 0.5).finished());
  EXPECT_THROW(io::read_labels_csv(dir / "c.csv"), ValidationError);
  EXPECT_THROW(io::read_labels_csv(dir / "missing.csv"), ValidationError);
}

TEST(TransformJsonTest, RoundTrip) {
  TempDir dir;
  const NormalizationTransform t{(Vector(2) << 0.1, -1.0 / 3.0).finished(), 2.0 * std::sqrt(5.0)};
  io::write_transform(dir / "t.json", t);
  const NormalizationTransform back = io::read_transform(dir / "t.json");
  EXPECT_EQ(back.center, t.center);
  EXPECT_EQ(back.scale, t.scale);
  write_file(dir / "bad.json", R"({"center": [0], "scale": -1})");
  EXPECT_THROW(io::read_transform(dir / "bad.json"), ValidationError);
  write_file(dir / "broken.json", "{");
  EXPECT_THROW(io::read_transform(dir / "broken.json"), ValidationError);
}

TEST(ReportJsonTest, RoundTripAndFields) {
  TempDir dir;
  const DiscreteMeasure x = testing::line_measure({-0.25, 0.25}, {0.5, 0.5});
  const SolveReport r = sinkhorn_solve(x, x, Config{});
  io::write_report(dir / "r.json", r, 1.0, 1e-10);
  const io::StoredReport back = io::read_report(dir / "r.json");
  EXPECT_EQ(back.report.potentials.f, r.potentials.f);
  EXPECT_EQ(back.report.potentials.g, r.potentials.g);
  EXPECT_EQ(back.report.dual_value, r.dual_value);
  EXPECT_EQ(back.report.gradient_norm, r.gradient_norm);
  EXPECT_EQ(back.report.iterations, r.iterations);
  EXPECT_EQ(back.report.converged, r.converged);
  EXPECT_EQ(back.eta, 1.0);
  EXPECT_EQ(back.tolerance, 1e-10);
  const std::string text = io::report_json(r, 1.0, 1e-10);
  for (const char* key : {"\"f\"", "\"g\"", "\"dual_value\"", "\"gradient_norm\"",
                          "\"iterations\"", "\"converged\""}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
  write_file(dir / "partial.json", R"({"f": [0], "g": [0]})");
  EXPECT_THROW(io::read_report(dir / "partial.json"), ValidationError);
}

TEST(ScenarioJsonTest, RoundTripWithLabels) {
  TempDir dir;
  const Scenario s = regression_scenario();
  io::write_scenario(dir / "s.json", s);
  const Scenario back = io::read_scenario(dir / "s.json");
  EXPECT_EQ(back.mu.points(), s.mu.points());
  EXPECT_EQ(back.nu.weights(), s.nu.weights());
  EXPECT_EQ(back.eta, s.eta);
  ASSERT_TRUE(back.label_model.has_value());
  EXPECT_EQ(back.label_model->kind, LabelModel::Kind::kRegression);
  EXPECT_EQ(back.label_model->values, s.label_model->values);
  EXPECT_EQ(back.label_model->noise, s.label_model->noise);

  write_file(dir / "bad.json", R"({"mu_points": [[0.9]], "mu_weights": [1],
    "nu_points": [[0]], "nu_weights": [1], "eta": 1,
    "label_model": {"kind": "ordinal", "values": [0]}})");
  EXPECT_THROW(io::read_scenario(dir / "bad.json"), ValidationError);
}

TEST(ExperimentSpecJsonTest, ResolvesScenarioRelativeToSpec) {
  TempDir dir;
  write_file(dir / "spec.json", R"({"scenario": "s.json", "metric": "map_mse",
    "sample_sizes": [10, 20, 40], "trials": 12, "seed": 18446744073709551615,
    "eta": 0.5, "tolerance": 1e-9})");
  const ExperimentSpec spec = io::read_experiment_spec(dir / "spec.json");
  EXPECT_EQ(spec.scenario_path, (dir / "s.json").string());
  EXPECT_EQ(spec.metric, Metric::kMapMse);
  EXPECT_EQ(spec.sample_sizes, (std::vector<int>{10, 20, 40}));
  EXPECT_EQ(spec.trials, 12);
  EXPECT_EQ(spec.seed, 18446744073709551615ull);
  EXPECT_EQ(spec.eta, 0.5);
  EXPECT_EQ(spec.tolerance, 1e-9);
  EXPECT_EQ(spec.max_iterations, 10000);
  write_file(dir / "bad.json", R"({"scenario": "s.json", "metric": "speed",
    "sample_sizes": [10, 20], "trials": 12, "eta": 1})");
  EXPECT_THROW(io::read_experiment_spec(dir / "bad.json"), ValidationError);
}

TEST(CurveCsvTest, Columns) {
  TempDir dir;
  RateCurve curve;
  curve.sizes.push_back(summarize(10, std::vector<double>{0.1, 0.3}, 1));
  io::write_curve_csv(dir / "c.csv", curve);
  const std::string text = testing::read_file(dir / "c.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), "n,trials_ok,trials_failed,mean,mse,q50,q90,q99");
  EXPECT_NE(text.find("10,2,1,"), std::string::npos);
}

TEST(FormatDoubleTest, SeventeenDigits) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(io::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace eot
