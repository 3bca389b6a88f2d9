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

#include "gridwx/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "gridwx/errors.hpp"
#include "gridwx/rng.hpp"

namespace gridwx::synth {

namespace {

/// Event truth as an exact-count renewal sequence: geometric run lengths with
/// the requested mean, runs placed by a uniform stars-and-bars composition of
/// the zero hours. Hits the target base rate to within rounding.
std::vector<int> draw_events(Rng& rng, int span_hours, double base_rate,
                             double persistence_hours) {
  const long long span = span_hours;
  long long target = std::llround(base_rate * static_cast<double>(span));
  target = std::clamp<long long>(target, 1, span - 1);

  std::vector<long long> runs;
  long long placed = 0;
  while (placed < target) {
    long long len = rng.geometric_at_least_one(persistence_hours);
    len = std::min(len, target - placed);
    runs.push_back(len);
    placed += len;
  }

  const long long zeros = span - target;
  const long long n_gaps = static_cast<long long>(runs.size()) + 1;
  // One zero is reserved for the leading gap so hour 0 is always eventless
  // (keeps the cycle-counter derivation exact).
  const long long free_zeros = zeros - 1;
  const long long k = n_gaps - 1;
  std::vector<long long> cuts;
  if (k > 0) {
    std::set<long long> chosen;
    while (static_cast<long long>(chosen.size()) < k) {
      chosen.insert(static_cast<long long>(
          rng.below(static_cast<std::uint64_t>(free_zeros + k))));
    }
    cuts.assign(chosen.begin(), chosen.end());
  }
  std::vector<long long> gaps(n_gaps, 0);
  long long prev = -1;
  for (long long i = 0; i < k; ++i) {
    gaps[i] = cuts[static_cast<std::size_t>(i)] - prev - 1;
    prev = cuts[static_cast<std::size_t>(i)];
  }
  gaps[n_gaps - 1] = (free_zeros + k) - prev - 1;
  gaps[0] += 1;  // the reserved zero

  std::vector<int> events(static_cast<std::size_t>(span), 0);
  std::size_t pos = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    pos += static_cast<std::size_t>(gaps[r]);
    for (long long h = 0; h < runs[r]; ++h) events[pos++] = 1;
  }
  return events;
}

std::string lambda_model_id(double lambda) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "synth_lambda_%.2f", lambda);
  return std::string(buf);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void ScenarioSpec::validate() const {
  if (n_sites < 1) throw DomainError("scenario: n_sites must be >= 1");
  if (span_hours < window_h || span_hours < 2) {
    throw DomainError("scenario: span too short for the window");
  }
  if (!(base_rate > 0.0 && base_rate < 1.0)) {
    throw DomainError("scenario: base rate must lie in (0, 1)");
  }
  if (!(persistence_hours >= 1.0)) {
    throw DomainError("scenario: persistence must be >= 1 h");
  }
  if (lambdas.empty()) throw DomainError("scenario: no lambdas");
  for (const double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) {
      throw DomainError("scenario: lambda outside [0, 1]");
    }
  }
  if (logit_jitter_sd < 0.0) throw DomainError("scenario: negative jitter");
  if (cadence_h < 1 || window_h < 1) {
    throw DomainError("scenario: cadence and window must be >= 1 h");
  }
}

Scenario gen_scenario(const ScenarioSpec& spec) {
  spec.validate();
  Scenario scenario;

  // Sites: alternating transmission corridors and wind farms spread over a
  // plausible latitude/longitude box, a few helicopter-access only.
  for (int i = 0; i < spec.n_sites; ++i) {
    Rng rng(Rng::derive_seed(spec.seed, 10000 + static_cast<std::uint64_t>(i)));
    Site site;
    char suffix = static_cast<char>('A' + (i % 26));
    site.site_id = "SYN_";
    site.site_id += suffix;
    if (i >= 26) site.site_id += std::to_string(i / 26);
    site.kind = (i % 2 == 0) ? SiteKind::transmission : SiteKind::windfarm;
    site.lat = 49.0 + rng.uniform(0.0, 6.0);
    site.lon = -75.0 + rng.uniform(0.0, 10.0);
    site.elevation_asl_m = 250.0 + rng.uniform(0.0, 650.0);
    site.sensor_height_agl_m = default_sensor_height(site.kind);
    site.helicopter_access = (i % 5 == 0);
    scenario.sites.push_back(std::move(site));
  }

  // Event truth per site.
  std::vector<std::vector<int>> events;
  long long pooled_events = 0;
  for (int i = 0; i < spec.n_sites; ++i) {
    Rng rng(Rng::derive_seed(spec.seed, static_cast<std::uint64_t>(i)));
    events.push_back(
        draw_events(rng, spec.span_hours, spec.base_rate, spec.persistence_hours));
    for (const int y : events.back()) pooled_events += y;
  }
  scenario.pooled_hourly_rate =
      static_cast<double>(pooled_events) /
      static_cast<double>(static_cast<long long>(spec.n_sites) * spec.span_hours);

  for (int i = 0; i < spec.n_sites; ++i) {
    std::vector<Sample> samples;
    samples.reserve(events[static_cast<std::size_t>(i)].size());
    for (int h = 0; h < spec.span_hours; ++h) {
      samples.push_back({spec.start + h,
                         static_cast<double>(events[static_cast<std::size_t>(i)]
                                                   [static_cast<std::size_t>(h)]),
                         Qc::valid});
    }
    scenario.labels.emplace_back(scenario.sites[static_cast<std::size_t>(i)].site_id,
                                 Variable::icing, std::move(samples));
  }

  // Pooled windowed climatology on the cadence grid, computed directly from
  // the event vectors.
  {
    long long windowed_events = 0;
    long long windows = 0;
    for (int i = 0; i < spec.n_sites; ++i) {
      const auto& y = events[static_cast<std::size_t>(i)];
      const std::int64_t first = spec.start.hours();
      std::int64_t issue = ceil_to_cadence(spec.start, spec.cadence_h).hours();
      for (; issue + spec.window_h <= first + spec.span_hours;
           issue += spec.cadence_h) {
        int any = 0;
        for (int h = 0; h < spec.window_h; ++h) {
          if (y[static_cast<std::size_t>(issue - first + h)] == 1) {
            any = 1;
            break;
          }
        }
        windowed_events += any;
        ++windows;
      }
    }
    scenario.pooled_window_rate =
        windows == 0 ? 0.0
                     : static_cast<double>(windowed_events) /
                           static_cast<double>(windows);
  }

  // Constant hourly probability whose window union reproduces the pooled
  // windowed climatology.
  const double p0 =
      -std::expm1(std::log1p(-scenario.pooled_window_rate) /
                  static_cast<double>(spec.window_h));

  // Forecast family: hourly probability lambda * y + (1 - lambda) * p0.
  for (const double lambda : spec.lambdas) {
    std::vector<ForecastMatrix> family;
    for (int i = 0; i < spec.n_sites; ++i) {
      Rng jitter_rng(Rng::derive_seed(
          spec.seed, 30000 + static_cast<std::uint64_t>(i) * 64 +
                         static_cast<std::uint64_t>(std::llround(lambda * 100))));
      const auto& y = events[static_cast<std::size_t>(i)];
      std::vector<ForecastCell> cells;
      const std::int64_t first = spec.start.hours();
      std::int64_t issue = ceil_to_cadence(spec.start, spec.cadence_h).hours();
      for (; issue + spec.window_h <= first + spec.span_hours;
           issue += spec.cadence_h) {
        for (int lead = 0; lead < spec.window_h; ++lead) {
          const int truth = y[static_cast<std::size_t>(issue - first + lead)];
          double p = lambda * truth + (1.0 - lambda) * p0;
          if (spec.logit_jitter_sd > 0.0) {
            const double clamped = std::clamp(p, 1e-6, 1.0 - 1e-6);
            const double logit = std::log(clamped / (1.0 - clamped));
            p = sigmoid(logit + spec.logit_jitter_sd * jitter_rng.normal());
          }
          cells.push_back({HourStamp(issue), HourStamp(issue + lead),
                           std::clamp(p, 0.0, 1.0)});
        }
      }
      family.emplace_back(lambda_model_id(lambda),
                          scenario.sites[static_cast<std::size_t>(i)].site_id,
                          Variable::icing, spec.cadence_h, std::move(cells));
    }
    scenario.forecasts.emplace_back(lambda, std::move(family));
  }

  // Cycle counters: one logged de-icing cycle per event hour.
  for (int i = 0; i < spec.n_sites; ++i) {
    CycleCounterSeries series;
    series.site_id = scenario.sites[static_cast<std::size_t>(i)].site_id;
    long long count = 0;
    for (int h = 0; h < spec.span_hours; ++h) {
      count += events[static_cast<std::size_t>(i)][static_cast<std::size_t>(h)];
      series.samples.emplace_back(spec.start + h, count);
    }
    scenario.cycle_counts.push_back(std::move(series));
  }

  // Production streams for wind-farm sites: icing hours lose a third or more
  // of potential output under cold hub temperatures.
  for (int i = 0; i < spec.n_sites; ++i) {
    const Site& site = scenario.sites[static_cast<std::size_t>(i)];
    if (site.kind != SiteKind::windfarm) continue;
    Rng rng(Rng::derive_seed(spec.seed, 20000 + static_cast<std::uint64_t>(i)));
    for (int h = 0; h < spec.span_hours; ++h) {
      const bool icing =
          events[static_cast<std::size_t>(i)][static_cast<std::size_t>(h)] == 1;
      ProductionRecord rec;
      rec.farm_id = site.site_id;
      rec.hour = spec.start + h;
      rec.hub_wind_ms = icing ? rng.uniform(6.0, 16.0) : rng.uniform(1.0, 18.0);
      const double potential =
          potential_power(scenario.power_curve, rec.hub_wind_ms);
      const double loss =
          icing ? rng.uniform(0.35, 0.95) : rng.uniform(0.0, 0.08);
      rec.observed_kw = potential * (1.0 - loss);
      rec.hub_temp_k = icing ? rng.uniform(264.0, 272.0) : rng.uniform(268.0, 295.0);
      scenario.production.push_back(std::move(rec));
    }
  }

  // Vertical profiles driving the physics index: cold, cloudy, windy columns
  // during events; a broad mix otherwise.
  for (int i = 0; i < spec.n_sites; ++i) {
    const Site& site = scenario.sites[static_cast<std::size_t>(i)];
    Rng rng(Rng::derive_seed(spec.seed, 40000 + static_cast<std::uint64_t>(i)));
    for (int h = 0; h < spec.span_hours; ++h) {
      const bool icing =
          events[static_cast<std::size_t>(i)][static_cast<std::size_t>(h)] == 1;
      SiteProfile p;
      p.site_id = site.site_id;
      p.hour = spec.start + h;
      p.t2m_k = icing ? rng.uniform(263.0, 272.0) : rng.uniform(255.0, 292.0);
      p.d2m_k = p.t2m_k - rng.uniform(0.0, 4.0);
      const double speed10 =
          icing ? rng.uniform(3.0, 10.0) : rng.uniform(0.5, 15.0);
      const double direction = rng.uniform(0.0, 6.283185307179586);
      const double ratio = rng.uniform(1.1, 1.6);
      p.u10 = speed10 * std::cos(direction);
      p.v10 = speed10 * std::sin(direction);
      p.u100 = p.u10 * ratio;
      p.v100 = p.v10 * ratio;
      p.sp_pa = 101325.0 * std::exp(-site.elevation_asl_m / 8400.0) *
                (1.0 + rng.uniform(-0.01, 0.01));
      p.z_sfc_geopot = site.elevation_asl_m * kGravity;
      const double clwc_low =
          icing ? rng.uniform(3.0e-6, 2.0e-5)
                : (rng.uniform01() < 0.85 ? 0.0 : rng.uniform(0.0, 4.0e-6));
      const double z1000 = 110.0 + rng.uniform(-30.0, 30.0);
      const double z900 = 990.0 + rng.uniform(-40.0, 40.0);
      const double z800 = 1950.0 + rng.uniform(-50.0, 50.0);
      p.levels = {
          {1000.0, z1000 * kGravity, clwc_low},
          {900.0, z900 * kGravity, clwc_low * rng.uniform(0.6, 1.0)},
          {800.0, z800 * kGravity, clwc_low * rng.uniform(0.2, 0.7)},
      };
      scenario.profiles.push_back(std::move(p));
    }
  }

  return scenario;
}

}  // namespace gridwx::synth
