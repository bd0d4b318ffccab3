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

#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "eot/errors.hpp"
#include "json.hpp"

namespace eot::io {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table parse_table(std::istream& in, const std::string& source) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    std::vector<double> row;
    row.reserve(cells.size());
    bool numeric = true;
    for (const auto& c : cells) {
      const auto v = parse_number(c);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (first && !numeric) {
      table.header = cells;
      width = cells.size();
      first = false;
      continue;
    }
    if (!numeric) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": non-numeric value");
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(width) + " columns, found " +
                            std::to_string(row.size()));
    }
    first = false;
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw ValidationError(source + ": no data rows");
  return table;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

json read_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

template <typename T>
T field(const json& j, const char* key, const std::string& source) {
  if (!j.contains(key)) throw ValidationError(source + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(source + ": field '" + key + "': " + e.what());
  }
}

json vector_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json points_json(const PointCloud& pts) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index l = 0; l < pts.cols(); ++l) row.push_back(pts(i, l));
    arr.push_back(std::move(row));
  }
  return arr;
}

PointCloud points_from(const std::vector<std::vector<double>>& rows, const std::string& source) {
  if (rows.empty()) throw ValidationError(source + ": empty point list");
  PointCloud pts(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw ValidationError(source + ": ragged point list");
    for (std::size_t l = 0; l < rows[i].size(); ++l) {
      pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = rows[i][l];
    }
  }
  return pts;
}

}  // namespace

std::string format_double(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

DiscreteMeasure parse_point_csv(std::istream& in, const std::string& source) {
  const Table table = parse_table(in, source);
  const std::size_t width = table.rows.front().size();
  const bool weighted = !table.header.empty() && table.header.back() == "weight";
  if (weighted && width < 2) throw ValidationError(source + ": weight column without coordinates");
  const std::size_t dim = weighted ? width - 1 : width;
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  PointCloud pts(n, static_cast<Eigen::Index>(dim));
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    for (std::size_t l = 0; l < dim; ++l) pts(i, static_cast<Eigen::Index>(l)) = row[l];
    w[i] = weighted ? row.back() : 1.0 / static_cast<double>(n);
  }
  try {
    return DiscreteMeasure(std::move(pts), std::move(w));
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

DiscreteMeasure read_point_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_point_csv(in, path.string());
}

PointCloud read_points(const std::filesystem::path& path) {
  return read_point_csv(path).points();
}

void write_point_csv(const std::filesystem::path& path, const DiscreteMeasure& m) {
  auto out = open_out(path);
  for (Eigen::Index l = 0; l < m.dim(); ++l) out << 'x' << l << ',';
  out << "weight\n";
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    for (Eigen::Index l = 0; l < m.dim(); ++l) out << m.points()(i, l) << ',';
    out << m.weight(i) << '\n';
  }
}

void write_points(const std::filesystem::path& path, const PointCloud& pts) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index l = 0; l < pts.cols(); ++l) {
      if (l > 0) out << ',';
      out << pts(i, l);
    }
    out << '\n';
  }
}

Vector read_labels_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  const Table table = parse_table(in, path.string());
  if (table.rows.front().size() != 1) {
    throw ValidationError(path.string() + ": labels file must have a single column");
  }
  Vector labels(static_cast<Eigen::Index>(table.rows.size()));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    labels[static_cast<Eigen::Index>(i)] = table.rows[i][0];
  }
  return labels;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& values) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j > 0) out << ',';
      out << values(i, j);
    }
    out << '\n';
  }
}

NormalizationTransform read_transform(const std::filesystem::path& path) {
  const json j = read_json(path);
  NormalizationTransform t;
  t.center = vector_from(field<std::vector<double>>(j, "center", path.string()));
  t.scale = field<double>(j, "scale", path.string());
  if (!(t.scale > 0.0)) throw ValidationError(path.string() + ": scale must be positive");
  return t;
}

void write_transform(const std::filesystem::path& path, const NormalizationTransform& t) {
  write_json(path, json{{"center", vector_json(t.center)}, {"scale", t.scale}});
}

std::string report_json(const SolveReport& report, double eta, double tolerance) {
  const json j{{"f", vector_json(report.potentials.f)},
               {"g", vector_json(report.potentials.g)},
               {"dual_value", report.dual_value},
               {"gradient_norm", report.gradient_norm},
               {"iterations", report.iterations},
               {"converged", report.converged},
               {"eta", eta},
               {"tolerance", tolerance}};
  return j.dump(2);
}

void write_report(const std::filesystem::path& path, const SolveReport& report, double eta,
                  double tolerance) {
  auto out = open_out(path);
  out << report_json(report, eta, tolerance) << '\n';
}

StoredReport read_report(const std::filesystem::path& path) {
  const json j = read_json(path);
  const std::string src = path.string();
  StoredReport stored;
  SolveReport& r = stored.report;
  r.potentials.f = vector_from(field<std::vector<double>>(j, "f", src));
  r.potentials.g = vector_from(field<std::vector<double>>(j, "g", src));
  r.potentials.normalized = true;
  r.dual_value = field<double>(j, "dual_value", src);
  r.gradient_norm = field<double>(j, "gradient_norm", src);
  r.iterations = field<int>(j, "iterations", src);
  r.converged = field<bool>(j, "converged", src);
  stored.eta = j.contains("eta") ? field<double>(j, "eta", src) : 0.0;
  stored.tolerance = j.contains("tolerance") ? field<double>(j, "tolerance", src) : 0.0;
  return stored;
}

Scenario read_scenario(const std::filesystem::path& path) {
  const json j = read_json(path);
  const std::string src = path.string();
  try {
    DiscreteMeasure mu(points_from(field<std::vector<std::vector<double>>>(j, "mu_points", src), src),
                       vector_from(field<std::vector<double>>(j, "mu_weights", src)));
    DiscreteMeasure nu(points_from(field<std::vector<std::vector<double>>>(j, "nu_points", src), src),
                       vector_from(field<std::vector<double>>(j, "nu_weights", src)));
    Scenario s{std::move(mu), std::move(nu), field<double>(j, "eta", src), std::nullopt};
    if (j.contains("label_model") && !j.at("label_model").is_null()) {
      const json& lm = j.at("label_model");
      LabelModel model;
      const auto kind = field<std::string>(lm, "kind", src);
      if (kind == "regression") {
        model.kind = LabelModel::Kind::kRegression;
      } else if (kind == "classification") {
        model.kind = LabelModel::Kind::kClassification;
      } else {
        throw ValidationError(src + ": label_model.kind must be regression or classification");
      }
      model.values = vector_from(field<std::vector<double>>(lm, "values", src));
      if (lm.contains("noise")) model.noise = field<double>(lm, "noise", src);
      if (lm.contains("alpha")) model.alpha = field<double>(lm, "alpha", src);
      if (lm.contains("c0")) model.c0 = field<double>(lm, "c0", src);
      model.validate(s.nu.size());
      s.label_model = std::move(model);
    }
    return s;
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind(src, 0) == 0) throw;
    throw ValidationError(src + ": " + what);
  }
}

void write_scenario(const std::filesystem::path& path, const Scenario& s) {
  json j{{"mu_points", points_json(s.mu.points())},
         {"mu_weights", vector_json(s.mu.weights())},
         {"nu_points", points_json(s.nu.points())},
         {"nu_weights", vector_json(s.nu.weights())},
         {"eta", s.eta}};
  if (s.label_model) {
    const LabelModel& lm = *s.label_model;
    j["label_model"] = json{
        {"kind", lm.kind == LabelModel::Kind::kRegression ? "regression" : "classification"},
        {"values", vector_json(lm.values)},
        {"noise", lm.noise},
        {"alpha", lm.alpha},
        {"c0", lm.c0}};
  }
  write_json(path, j);
}

ExperimentSpec read_experiment_spec(const std::filesystem::path& path) {
  const json j = read_json(path);
  const std::string src = path.string();
  ExperimentSpec spec;
  std::filesystem::path scenario = field<std::string>(j, "scenario", src);
  if (scenario.is_relative()) scenario = path.parent_path() / scenario;
  spec.scenario_path = scenario.string();
  spec.metric = parse_metric(field<std::string>(j, "metric", src));
  spec.sample_sizes = field<std::vector<int>>(j, "sample_sizes", src);
  spec.trials = field<int>(j, "trials", src);
  spec.seed = j.contains("seed") ? field<std::uint64_t>(j, "seed", src) : 0;
  spec.eta = field<double>(j, "eta", src);
  if (j.contains("tolerance")) spec.tolerance = field<double>(j, "tolerance", src);
  if (j.contains("max_iterations")) spec.max_iterations = field<int>(j, "max_iterations", src);
  return spec;
}

void write_curve_csv(const std::filesystem::path& path, const RateCurve& curve) {
  auto out = open_out(path);
  out << "n,trials_ok,trials_failed,mean,mse,q50,q90,q99\n";
  for (const auto& s : curve.sizes) {
    out << s.n << ',' << s.trials_ok << ',' << s.trials_failed << ',' << s.mean << ',' << s.mse
        << ',' << s.q50 << ',' << s.q90 << ',' << s.q99 << '\n';
  }
}

void write_curve_sidecar(const std::filesystem::path& path, const RateCurve& curve,
                         const ExperimentSpec& spec) {
  json sizes = json::array();
  for (const auto& s : curve.sizes) {
    sizes.push_back(json{{"n", s.n}, {"std_error", s.std_error}});
  }
  json j{{"metric", std::string(metric_name(curve.metric))},
         {"fitted_slope", curve.slope_fitted ? json(curve.fitted_slope) : json(nullptr)},
         {"fit_intercept", curve.slope_fitted ? json(curve.fit_intercept) : json(nullptr)},
         {"degenerate", curve.degenerate},
         {"valid", curve.valid},
         {"std_errors", sizes},
         {"spec",
          json{{"scenario", spec.scenario_path},
               {"metric", std::string(metric_name(spec.metric))},
               {"sample_sizes", spec.sample_sizes},
               {"trials", spec.trials},
               {"seed", spec.seed},
               {"eta", spec.eta},
               {"tolerance", spec.tolerance},
               {"max_iterations", spec.max_iterations},
               {"threads", spec.threads}}}};
  write_json(path, j);
}

void write_tails_csv(const std::filesystem::path& path, const TailReport& report) {
  auto out = open_out(path);
  out << "quantity,t,level,empirical,bound,holds\n";
  out << "gradient_sq_mean,,," << report.gradient_sq_mean << ',' << report.gradient_sq_bound << ','
      << (report.gradient_mean_within_bound() ? 1 : 0) << '\n';
  out << "scaled_gradient_vs_2var,,," << report.scaled_mean << ',' << report.variance_identity
      << ',' << (report.variance_identity_holds() ? 1 : 0) << '\n';
  for (const auto& tail : report.u_statistic) {
    out << "u_statistic," << tail.t << ',' << tail.level << ',' << tail.empirical_quantile << ','
        << tail.bound << ',' << (tail.empirical_quantile <= tail.bound ? 1 : 0) << '\n';
  }
}

}  // namespace eot::io
