// Copyright (c) 2026 The gridwx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gridwx/verify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "gridwx/csv.hpp"
#include "gridwx/errors.hpp"

namespace gridwx {

namespace {

void check_scored_input(std::span<const double> probabilities,
                        std::span<const int> labels) {
  if (probabilities.size() != labels.size()) {
    throw SchemaError("scores and labels differ in length");
  }
  for (const int y : labels) {
    if (y != 0 && y != 1) throw DomainError("labels must be 0 or 1");
  }
}

/// Indices sorted by score descending; ties keep input order.
std::vector<std::size_t> rank_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  return order;
}

}  // namespace

std::optional<double> mae(std::span<const std::pair<double, double>> pairs) {
  if (pairs.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& [fc, obs] : pairs) sum += std::abs(fc - obs);
  return sum / static_cast<double>(pairs.size());
}

std::optional<double> fractional_skill(double e_model, double e_base) {
  if (!(e_base > 0.0)) return std::nullopt;
  return 1.0 - e_model / e_base;
}

ConfusionCounts confusion(std::span<const double> probabilities,
                          std::span<const int> labels, double tau) {
  check_scored_input(probabilities, labels);
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw DomainError("confusion: tau outside [0, 1]");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool alert = probabilities[i] >= tau;
    if (alert && labels[i] == 1) ++c.tp;
    else if (alert) ++c.fp;
    else if (labels[i] == 1) ++c.fn;
    else ++c.tn;
  }
  return c;
}

std::optional<double> precision(const ConfusionCounts& c) {
  if (c.tp + c.fp == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

std::optional<double> recall(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

std::optional<double> f1_score(const ConfusionCounts& c) {
  if (c.tp + c.fp + c.fn == 0) return std::nullopt;
  // Zero precision and recall yield F1 = 0 rather than 0/0.
  return 2.0 * static_cast<double>(c.tp) /
         static_cast<double>(2 * c.tp + c.fp + c.fn);
}

std::optional<double> csi(const ConfusionCounts& c) {
  if (c.tp + c.fp + c.fn == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp + c.fn);
}

std::optional<PrCurve> pr_curve_and_ap(std::span<const double> probabilities,
                                       std::span<const int> labels) {
  check_scored_input(probabilities, labels);
  const long long positives =
      std::count(labels.begin(), labels.end(), 1);
  if (positives == 0) return std::nullopt;

  const std::vector<std::size_t> order = rank_by_score(probabilities);
  PrCurve out;
  long long tp = 0;
  long long fp = 0;
  double prev_recall = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = probabilities[order[i]];
    // Consume the whole tie group; tied scores share one threshold.
    while (i < order.size() && probabilities[order[i]] == threshold) {
      if (labels[order[i]] == 1) ++tp;
      else ++fp;
      ++i;
    }
    const double rec = static_cast<double>(tp) / static_cast<double>(positives);
    const double prec = static_cast<double>(tp) / static_cast<double>(tp + fp);
    out.ap += (rec - prev_recall) * prec;
    prev_recall = rec;
    out.points.push_back({threshold, rec, prec});
  }
  return out;
}

std::optional<RocCurve> roc_and_auc(std::span<const double> probabilities,
                                    std::span<const int> labels) {
  check_scored_input(probabilities, labels);
  const long long positives = std::count(labels.begin(), labels.end(), 1);
  const long long negatives = static_cast<long long>(labels.size()) - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;

  const std::vector<std::size_t> order = rank_by_score(probabilities);
  RocCurve out;
  out.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  long long tp = 0;
  long long fp = 0;
  long long prev_tp = 0;
  long long prev_fp = 0;
  // Trapezoid sum kept in integers until the final division, so tie handling
  // is exactly the half-credit pairwise count.
  long long twice_area_numerator = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = probabilities[order[i]];
    while (i < order.size() && probabilities[order[i]] == threshold) {
      if (labels[order[i]] == 1) ++tp;
      else ++fp;
      ++i;
    }
    twice_area_numerator += (fp - prev_fp) * (tp + prev_tp);
    out.points.push_back({threshold,
                          static_cast<double>(fp) / static_cast<double>(negatives),
                          static_cast<double>(tp) / static_cast<double>(positives)});
    prev_tp = tp;
    prev_fp = fp;
  }
  out.auc = static_cast<double>(twice_area_numerator) /
            (2.0 * static_cast<double>(positives) *
             static_cast<double>(negatives));
  return out;
}

std::optional<double> lift(double ap, double base_rate) {
  if (!(base_rate > 0.0)) return std::nullopt;
  return ap / base_rate;
}

std::vector<CurvePoint> station_f1_cdf(std::vector<double> f1_values) {
  std::sort(f1_values.begin(), f1_values.end());
  const double n = static_cast<double>(f1_values.size());
  std::vector<CurvePoint> out;
  for (std::size_t i = 0; i < f1_values.size(); ++i) {
    const double v = f1_values[i];
    if (i + 1 < f1_values.size() && f1_values[i + 1] == v) continue;
    out.push_back({v, v, static_cast<double>(i + 1) / n});
  }
  return out;
}

bool SliceSpec::contains(HourStamp valid) const {
  if (local_hours) {
    const int local =
        ((valid.hour_of_day() + utc_offset_h) % 24 + 24) % 24;
    if (local < local_hours->first || local > local_hours->second) return false;
  }
  if (!months.empty() &&
      std::find(months.begin(), months.end(), valid.month()) == months.end()) {
    return false;
  }
  return true;
}

SliceSpec SliceSpec::preset(const std::string& name, int utc_offset_h) {
  SliceSpec s;
  s.name = name;
  s.utc_offset_h = utc_offset_h;
  if (name == "all") return s;
  if (name == "morning") { s.local_hours = {{6, 11}}; return s; }
  if (name == "afternoon") { s.local_hours = {{12, 17}}; return s; }
  if (name == "evening") { s.local_hours = {{18, 23}}; return s; }
  if (name == "night") { s.local_hours = {{0, 5}}; return s; }
  if (name == "winter") { s.months = {12, 1, 2}; return s; }
  if (name == "spring") { s.months = {3, 4, 5}; return s; }
  if (name == "summer") { s.months = {6, 7, 8}; return s; }
  if (name == "fall") { s.months = {9, 10, 11}; return s; }
  throw SchemaError("unknown slice '" + name + "'");
}

std::vector<ScoreReport> lead_profile(const ForecastMatrix& fc,
                                      const ObservationSeries& obs,
                                      std::span<const int> leads,
                                      const SliceSpec& slice) {
  if (leads.empty()) throw DomainError("lead_profile: no leads");
  std::vector<ScoreReport> out;
  for (const int lead : leads) {
    const AlignedPairs aligned = align(fc, obs, lead);
    std::vector<std::pair<double, double>> kept;
    for (std::size_t i = 0; i < aligned.pairs.size(); ++i) {
      if (slice.contains(aligned.issues[i] + lead)) {
        kept.push_back(aligned.pairs[i]);
      }
    }
    ScoreReport report;
    report.model_id = fc.model_id();
    report.site_id = fc.site_id();
    report.variable = std::string(to_string(fc.variable()));
    report.lead_h = lead;
    report.slice = slice.name;
    report.n_pairs = kept.size();
    report.n_dropped = aligned.n_dropped;
    report.metrics.emplace_back("mae", mae(kept));
    out.push_back(std::move(report));
  }
  return out;
}

double fraction_beating_baseline(std::span<const double> model_errors,
                                 std::span<const double> baseline_errors) {
  if (model_errors.size() != baseline_errors.size() || model_errors.empty()) {
    throw DomainError("fraction_beating_baseline: mismatched station sets");
  }
  std::size_t beating = 0;
  for (std::size_t i = 0; i < model_errors.size(); ++i) {
    if (model_errors[i] < baseline_errors[i]) ++beating;
  }
  return static_cast<double>(beating) /
         static_cast<double>(model_errors.size());
}

void write_report_csv(const std::filesystem::path& path,
                      std::span<const ScoreReport> reports) {
  CsvWriter w(path);
  w.row({"model_id", "site_id", "variable", "lead_h", "window_h", "slice",
         "metric", "value", "n_pairs", "n_dropped"});
  for (const ScoreReport& r : reports) {
    for (const auto& [name, value] : r.metrics) {
      w.row({r.model_id, r.site_id, r.variable,
             r.lead_h ? format_int(*r.lead_h) : "",
             r.window_h ? format_int(*r.window_h) : "", r.slice, name,
             value ? format_double(*value) : "",
             format_int(static_cast<long long>(r.n_pairs)),
             format_int(static_cast<long long>(r.n_dropped))});
    }
  }
}

void write_report_json(const std::filesystem::path& path,
                       std::span<const ScoreReport> reports) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ScoreReport& r : reports) {
    for (const auto& [name, value] : r.metrics) {
      nlohmann::json row;
      row["model_id"] = r.model_id;
      row["site_id"] = r.site_id;
      row["variable"] = r.variable;
      row["lead_h"] = r.lead_h ? nlohmann::json(*r.lead_h) : nlohmann::json();
      row["window_h"] =
          r.window_h ? nlohmann::json(*r.window_h) : nlohmann::json();
      row["slice"] = r.slice;
      row["metric"] = name;
      row["value"] = value ? nlohmann::json(*value) : nlohmann::json();
      row["n_pairs"] = r.n_pairs;
      row["n_dropped"] = r.n_dropped;
      rows.push_back(std::move(row));
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write report " + path.string());
  out << rows.dump(2) << "\n";
}

void write_curve_csv(const std::filesystem::path& path,
                     std::span<const CurvePoint> points) {
  CsvWriter w(path);
  w.row({"threshold", "x", "y"});
  for (const CurvePoint& p : points) {
    w.row({format_double(p.threshold), format_double(p.x), format_double(p.y)});
  }
}

}  // namespace gridwx
