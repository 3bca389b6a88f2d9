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

#include "gridwx/labels.hpp"

#include <algorithm>
#include <cmath>

#include "gridwx/errors.hpp"

namespace gridwx {

void CycleCounterSeries::validate() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].second < 0) {
      throw SchemaError("cycle counter " + site_id + ": negative count at " +
                        samples[i].first.to_string());
    }
    if (i > 0 && !(samples[i - 1].first < samples[i].first)) {
      throw SchemaError("cycle counter " + site_id +
                        ": timestamps not strictly increasing at " +
                        samples[i].first.to_string());
    }
  }
}

SygivreLabels sygivre_to_binary(const CycleCounterSeries& counter) {
  counter.validate();
  SygivreLabels out{ObservationSeries(counter.site_id, Variable::icing, {}), 0};
  std::vector<Sample> samples;
  samples.reserve(counter.samples.size());
  for (std::size_t i = 0; i < counter.samples.size(); ++i) {
    const auto& [hour, count] = counter.samples[i];
    if (i == 0) {
      samples.push_back({hour, 0.0, Qc::valid});
      continue;
    }
    const long long prev = counter.samples[i - 1].second;
    if (count < prev) {
      // Counter reset (maintenance or telemetry fault), not an accretion.
      samples.push_back({hour, 0.0, Qc::suspect});
      ++out.counter_resets;
    } else {
      samples.push_back({hour, count > prev ? 1.0 : 0.0, Qc::valid});
    }
  }
  out.binary =
      ObservationSeries(counter.site_id, Variable::icing, std::move(samples));
  return out;
}

PowerCurve::PowerCurve(std::vector<PowerCurvePoint> points, double cut_in_ms,
                       double cut_out_ms)
    : points_(std::move(points)), cut_in_(cut_in_ms), cut_out_(cut_out_ms) {
  if (points_.empty()) throw SchemaError("power curve: no points");
  if (!(cut_in_ >= 0.0) || !(cut_out_ > cut_in_)) {
    throw SchemaError("power curve: need 0 <= cut_in < cut_out");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const PowerCurvePoint& p = points_[i];
    if (p.power_kw < 0.0) throw SchemaError("power curve: negative power");
    if (i > 0 && !(points_[i - 1].wind_ms < p.wind_ms)) {
      throw SchemaError("power curve: speeds not strictly increasing");
    }
    if ((p.wind_ms < cut_in_ || p.wind_ms >= cut_out_) && p.power_kw != 0.0) {
      throw SchemaError("power curve: nonzero power outside [cut_in, cut_out)");
    }
    rated_kw_ = std::max(rated_kw_, p.power_kw);
  }
}

double potential_power(const PowerCurve& curve, double wind_ms) {
  if (wind_ms < 0.0) throw DomainError("potential_power: negative wind speed");
  if (wind_ms < curve.cut_in() || wind_ms >= curve.cut_out()) return 0.0;
  const auto pts = curve.points();
  if (wind_ms <= pts.front().wind_ms) return pts.front().power_kw;
  if (wind_ms >= pts.back().wind_ms) return pts.back().power_kw;
  const auto it = std::lower_bound(
      pts.begin(), pts.end(), wind_ms,
      [](const PowerCurvePoint& p, double w) { return p.wind_ms < w; });
  const PowerCurvePoint& hi = *it;
  const PowerCurvePoint& lo = *(it - 1);
  const double w = (wind_ms - lo.wind_ms) / (hi.wind_ms - lo.wind_ms);
  return lo.power_kw + w * (hi.power_kw - lo.power_kw);
}

ProductionLabelParams ProductionLabelParams::defaults_for(
    const PowerCurve& curve) {
  ProductionLabelParams params;
  params.min_potential_kw = 0.05 * curve.rated_kw();
  return params;
}

ProductionLabel icing_from_production(const ProductionRecord& rec,
                                      const PowerCurve& curve,
                                      const ProductionLabelParams& params) {
  if (rec.observed_kw < 0.0) {
    throw SchemaError("production " + rec.farm_id + " " + rec.hour.to_string() +
                      ": negative observed power");
  }
  const double potential = potential_power(curve, rec.hub_wind_ms);
  if (potential < params.min_potential_kw || potential <= 0.0) {
    return {std::nullopt, std::nullopt};
  }
  const double loss =
      std::clamp(1.0 - rec.observed_kw / potential, 0.0, 1.0);
  const int icing =
      (loss >= params.loss_threshold && rec.hub_temp_k <= params.temp_guard_k)
          ? 1
          : 0;
  return {loss, icing};
}

}  // namespace gridwx
