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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridwx/timebase.hpp"

namespace gridwx {

// Undefined metrics (empty input, zero alerts, single-class labels, zero
// baseline error) are nullopt values, not errors; reports carry them as
// empty cells.

std::optional<double> mae(std::span<const std::pair<double, double>> pairs);

/// 1 - e_model/e_base in (-inf, 1]; nullopt when e_base <= 0.
std::optional<double> fractional_skill(double e_model, double e_base);

struct ConfusionCounts {
  long long tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Alert iff p >= tau. Labels must be 0/1 and tau in [0, 1].
ConfusionCounts confusion(std::span<const double> probabilities,
                          std::span<const int> labels, double tau);

std::optional<double> precision(const ConfusionCounts& c);  // nullopt at 0 alerts
std::optional<double> recall(const ConfusionCounts& c);
std::optional<double> f1_score(const ConfusionCounts& c);
std::optional<double> csi(const ConfusionCounts& c);  // threat score == IoU

struct CurvePoint {
  double threshold = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct PrCurve {
  std::vector<CurvePoint> points;  // x = recall, y = precision, by threshold desc
  double ap = 0.0;                 // step-wise area, no interpolation
};

/// nullopt when there is no positive label. Tied scores share a threshold.
std::optional<PrCurve> pr_curve_and_ap(std::span<const double> probabilities,
                                       std::span<const int> labels);

struct RocCurve {
  std::vector<CurvePoint> points;  // x = FPR, y = TPR, anchored at (0,0)
  double auc = 0.0;                // trapezoidal; ties get half credit
};

/// nullopt unless both classes are present.
std::optional<RocCurve> roc_and_auc(std::span<const double> probabilities,
                                    std::span<const int> labels);

/// AP / base rate; nullopt when the base rate is 0.
std::optional<double> lift(double ap, double base_rate);

/// Right-continuous empirical CDF; one point per distinct value with
/// x = value and y = fraction <= value.
std::vector<CurvePoint> station_f1_cdf(std::vector<double> f1_values);

/// Hour-of-day (fixed UTC offset) and month filters applied to valid times.
struct SliceSpec {
  std::string name = "all";
  int utc_offset_h = -5;
  std::optional<std::pair<int, int>> local_hours;  // inclusive, e.g. {18, 23}
  std::vector<int> months;                         // empty = all months

  bool contains(HourStamp valid) const;
  /// Named presets: all, morning, afternoon, evening, night, winter, spring,
  /// summer, fall.
  static SliceSpec preset(const std::string& name, int utc_offset_h);
};

struct ScoreReport {
  std::string model_id;
  std::string site_id;  // or "pooled"
  std::string variable;
  std::optional<int> lead_h;
  std::optional<int> window_h;
  std::string slice = "all";
  std::vector<std::pair<std::string, std::optional<double>>> metrics;
  std::size_t n_pairs = 0;
  std::size_t n_dropped = 0;
};

/// MAE per lead over slice-filtered aligned pairs.
std::vector<ScoreReport> lead_profile(const ForecastMatrix& fc,
                                      const ObservationSeries& obs,
                                      std::span<const int> leads,
                                      const SliceSpec& slice);

/// Fraction of stations whose error is strictly below the baseline's.
double fraction_beating_baseline(std::span<const double> model_errors,
                                 std::span<const double> baseline_errors);

// Report interchange: one CSV/JSON row per metric, undefined values as empty
// cells (CSV) or null (JSON); curves as threshold,x,y.
void write_report_csv(const std::filesystem::path& path,
                      std::span<const ScoreReport> reports);
void write_report_json(const std::filesystem::path& path,
                       std::span<const ScoreReport> reports);
void write_curve_csv(const std::filesystem::path& path,
                     std::span<const CurvePoint> points);

}  // namespace gridwx
