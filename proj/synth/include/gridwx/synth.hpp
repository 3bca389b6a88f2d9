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

#include <cstdint>
#include <vector>

#include "gridwx/decide.hpp"
#include "gridwx/labels.hpp"
#include "gridwx/makkonen.hpp"
#include "gridwx/timebase.hpp"

namespace gridwx::synth {

/// Seeded synthetic scenario: event truth with controlled base rate and
/// persistence, a skill-graded forecast family, and matching sensor streams
/// (profiles, cycle counters, production) in the interchange schemas.
struct ScenarioSpec {
  std::uint64_t seed = 1;
  int n_sites = 14;
  HourStamp start = HourStamp::from_ymdh(2024, 1, 1, 0);
  int span_hours = 24 * 365;
  double base_rate = 0.0368;       // hourly event frequency target
  double persistence_hours = 6.0;  // mean event run length
  std::vector<double> lambdas = {0.0, 0.5, 1.0};  // forecast skill weights
  double logit_jitter_sd = 0.0;    // optional forecast noise
  int cadence_h = 6;
  int window_h = 24;
  void validate() const;
};

struct Scenario {
  std::vector<Site> sites;
  std::vector<ObservationSeries> labels;  // binary icing truth, one per site
  /// One forecast family per lambda; model ids "synth_lambda_X.XX".
  std::vector<std::pair<double, std::vector<ForecastMatrix>>> forecasts;
  std::vector<SiteProfile> profiles;      // all sites, hours ascending per site
  std::vector<CycleCounterSeries> cycle_counts;
  std::vector<ProductionRecord> production;
  PowerCurve power_curve{{{4.0, 0.0}, {12.0, 2000.0}, {20.0, 2000.0}}, 4.0};
  double pooled_hourly_rate = 0.0;  // realized, events / valid hours
  double pooled_window_rate = 0.0;  // realized windowed frequency, cadence grid
};

/// Deterministic given the spec (including the seed). Forecast hourly
/// probability is lambda * y_h + (1 - lambda) * p0 where p0 reproduces the
/// pooled windowed climatology, so lambda = 0 matches the climatology policy
/// and lambda = 1 matches the truth window exactly.
Scenario gen_scenario(const ScenarioSpec& spec);

}  // namespace gridwx::synth
