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

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gridwx {

/// UTC calendar time truncated to the hour. Stored as hours since
/// 1970-01-01T00:00:00Z; differences are exact integer hour counts.
class HourStamp {
 public:
  constexpr HourStamp() = default;
  constexpr explicit HourStamp(std::int64_t hours_since_epoch)
      : hours_(hours_since_epoch) {}

  static HourStamp from_ymdh(int year, unsigned month, unsigned day, unsigned hour);
  /// Strict "YYYY-MM-DDTHH:00:00Z" parse; anything else is a SchemaError.
  static HourStamp parse(std::string_view iso);
  std::string to_string() const;

  constexpr std::int64_t hours() const { return hours_; }
  int hour_of_day() const;  // 0..23 UTC
  int month() const;        // 1..12

  friend constexpr auto operator<=>(HourStamp, HourStamp) = default;
  friend constexpr HourStamp operator+(HourStamp t, std::int64_t h) {
    return HourStamp(t.hours_ + h);
  }
  friend constexpr HourStamp operator-(HourStamp t, std::int64_t h) {
    return HourStamp(t.hours_ - h);
  }
  friend constexpr std::int64_t operator-(HourStamp a, HourStamp b) {
    return a.hours_ - b.hours_;
  }

 private:
  std::int64_t hours_ = 0;
};

enum class Qc { valid, missing, suspect };

std::string_view to_string(Qc qc);
Qc qc_from_string(std::string_view text);

/// Scored variables and their fixed units. Forecasts for `icing` carry event
/// probabilities in [0,1]; observations carry the binary occurrence.
/// `icing_rate` is the physics proxy in g m^-2 s^-1.
enum class Variable { t2m, precip, wind, icing, icing_rate };

std::string_view to_string(Variable v);
Variable variable_from_string(std::string_view text);
std::string_view unit_of(Variable v);
/// Inclusive sanity band used by ingest QC.
std::pair<double, double> sanity_band(Variable v);

struct Sample {
  HourStamp hour;
  double value = 0.0;
  Qc qc = Qc::valid;
};

/// Hourly series for one (site, variable); timestamps strictly increasing.
class ObservationSeries {
 public:
  ObservationSeries(std::string site_id, Variable variable,
                    std::vector<Sample> samples);

  const std::string& site_id() const { return site_id_; }
  Variable variable() const { return variable_; }
  std::span<const Sample> samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }

  /// Binary-search lookup; nullptr when the hour is absent.
  const Sample* find(HourStamp hour) const;

 private:
  std::string site_id_;
  Variable variable_;
  std::vector<Sample> samples_;
};

struct ForecastCell {
  HourStamp issue;
  HourStamp valid;
  double value = 0.0;
};

/// Forecast values for one (model, site, variable) indexed by
/// (issue, valid). Leads are bounded to [0, 120] h and issue times must sit
/// on the cadence grid.
class ForecastMatrix {
 public:
  static constexpr int kMaxLeadHours = 120;

  ForecastMatrix(std::string model_id, std::string site_id, Variable variable,
                 int cadence_h, std::vector<ForecastCell> cells);

  const std::string& model_id() const { return model_id_; }
  const std::string& site_id() const { return site_id_; }
  Variable variable() const { return variable_; }
  int cadence_h() const { return cadence_h_; }
  std::span<const ForecastCell> cells() const { return cells_; }

  std::optional<double> at(HourStamp issue, HourStamp valid) const;
  /// Distinct issue times, ascending.
  std::vector<HourStamp> issue_times() const;

 private:
  std::string model_id_;
  std::string site_id_;
  Variable variable_;
  int cadence_h_ = 6;
  std::vector<ForecastCell> cells_;  // sorted by (issue, valid)
};

/// Decision/evaluation window. Windows are half-open [t, t+length) and a
/// windowed value is undefined when hourly coverage falls below
/// coverage_min.
struct WindowSpec {
  int length_hours = 24;
  double coverage_min = 0.75;
  void validate() const;
};

struct AlignedPairs {
  std::vector<std::pair<double, double>> pairs;  // (forecast, observed)
  std::vector<HourStamp> issues;                 // issue time per pair
  std::size_t n_dropped = 0;  // issue times lost to missing/suspect obs
};

/// One pair per issue time whose valid = issue + lead has a valid-flagged
/// observation, ordered by issue time. Site or variable mismatch is a
/// SchemaError.
AlignedPairs align(const ForecastMatrix& fc, const ObservationSeries& obs,
                   int lead_h);

/// Max of the binary series over [start, start+length); nullopt when valid
/// coverage < coverage_min.
std::optional<int> window_any(const ObservationSeries& y, HourStamp start,
                              const WindowSpec& spec);

/// Smallest cadence-grid hour at or after t (exact for pre-1970 hours too).
HourStamp ceil_to_cadence(HourStamp t, int cadence_h);

/// Union probability 1 - prod(1 - p_h); 0 for the empty window.
double window_prob(std::span<const double> hourly_probs);

/// Independence (Poisson) approximation 1 - exp(-H * p_bar).
double window_prob_poisson(double mean_prob, int window_hours);

struct WindowedInstance {
  HourStamp issue;
  double q = 0.0;  // forecast window probability
  int outcome = 0; // observed "any event in window"
};

struct WindowedInstances {
  std::vector<WindowedInstance> instances;
  std::size_t n_dropped = 0;  // issues lost to forecast gaps or label coverage
};

/// Per issue time: q over valid hours [issue+start_lead, issue+length) and
/// the windowed outcome over the same hours. Issues with incomplete forecast
/// hours or insufficient label coverage are dropped and counted.
WindowedInstances windowed_instances(const ForecastMatrix& fc,
                                     const ObservationSeries& labels,
                                     const WindowSpec& spec,
                                     int start_lead_h = 0);

}  // namespace gridwx
