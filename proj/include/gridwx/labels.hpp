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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridwx/timebase.hpp"

namespace gridwx {

/// Cumulative de-icing cycle counter from an icing probe; a positive hourly
/// increment marks rime accretion in that hour.
struct CycleCounterSeries {
  std::string site_id;
  std::vector<std::pair<HourStamp, long long>> samples;
  void validate() const;
};

struct SygivreLabels {
  ObservationSeries binary;       // variable = icing
  std::size_t counter_resets = 0; // decreases treated as resets, not events
};

/// Hour t gets 1 iff count(t) > count(t-1); the first hour gets 0; a counter
/// decrease marks hour t suspect (reset) and yields no event.
SygivreLabels sygivre_to_binary(const CycleCounterSeries& counter);

struct PowerCurvePoint {
  double wind_ms = 0.0;
  double power_kw = 0.0;
};

/// Farm power curve: zero below cut-in and at/above cut-out, piecewise
/// linear between points.
class PowerCurve {
 public:
  PowerCurve(std::vector<PowerCurvePoint> points, double cut_in_ms,
             double cut_out_ms = 25.0);

  double cut_in() const { return cut_in_; }
  double cut_out() const { return cut_out_; }
  double rated_kw() const { return rated_kw_; }
  std::span<const PowerCurvePoint> points() const { return points_; }

 private:
  std::vector<PowerCurvePoint> points_;
  double cut_in_ = 0.0;
  double cut_out_ = 25.0;
  double rated_kw_ = 0.0;
};

double potential_power(const PowerCurve& curve, double wind_ms);

struct ProductionRecord {
  std::string farm_id;
  HourStamp hour;
  double observed_kw = 0.0;
  double hub_wind_ms = 0.0;
  double hub_temp_k = 0.0;
};

struct ProductionLabelParams {
  double loss_threshold = 0.2;   // fraction of potential output lost
  double temp_guard_k = 275.15;  // no icing label above this hub temperature
  double min_potential_kw = 0.0; // below this, the hour is unlabelable
  static ProductionLabelParams defaults_for(const PowerCurve& curve);
};

struct ProductionLabel {
  std::optional<double> loss_fraction;  // clamped to [0, 1]
  std::optional<int> icing;
};

/// loss = 1 - observed/potential when potential >= min_potential_kw, else
/// undefined; icing = loss >= loss_threshold and hub_temp <= temp_guard.
ProductionLabel icing_from_production(const ProductionRecord& rec,
                                      const PowerCurve& curve,
                                      const ProductionLabelParams& params);

}  // namespace gridwx
