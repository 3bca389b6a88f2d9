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

#include "gridwx/makkonen.hpp"

#include <algorithm>
#include <cmath>

#include "gridwx/errors.hpp"

namespace gridwx {

std::string_view to_string(SiteKind kind) {
  switch (kind) {
    case SiteKind::transmission: return "transmission";
    case SiteKind::windfarm: return "windfarm";
    case SiteKind::station: return "station";
  }
  return "station";
}

SiteKind site_kind_from_string(std::string_view text) {
  if (text == "transmission") return SiteKind::transmission;
  if (text == "windfarm") return SiteKind::windfarm;
  if (text == "station") return SiteKind::station;
  throw SchemaError("unknown site kind '" + std::string(text) + "'");
}

double default_sensor_height(SiteKind kind) {
  switch (kind) {
    case SiteKind::transmission: return 50.0;
    case SiteKind::windfarm: return 80.0;
    case SiteKind::station: return 2.0;
  }
  return 2.0;
}

void Site::validate() const {
  if (site_id.empty()) throw SchemaError("site with empty id");
  if (!(lat >= -90.0 && lat <= 90.0)) {
    throw SchemaError("site " + site_id + ": latitude out of range");
  }
  if (!(lon >= -180.0 && lon < 180.0)) {
    throw SchemaError("site " + site_id + ": longitude out of range");
  }
  if (!(sensor_height_agl_m > 0.0)) {
    throw SchemaError("site " + site_id + ": sensor height must be > 0 m");
  }
}

double SiteProfile::wind10() const { return std::hypot(u10, v10); }
double SiteProfile::wind100() const { return std::hypot(u100, v100); }

void SiteProfile::validate() const {
  if (!(t2m_k >= 180.0 && t2m_k <= 340.0)) {
    throw SchemaError("profile " + site_id + " " + hour.to_string() +
                      ": t2m outside [180, 340] K");
  }
  if (!std::isfinite(z_sfc_geopot) || !std::isfinite(sp_pa) || sp_pa <= 0.0) {
    throw SchemaError("profile " + site_id + " " + hour.to_string() +
                      ": bad surface pressure/geopotential");
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const ProfileLevel& lv = levels[i];
    if (!(lv.pressure_hpa >= 800.0 && lv.pressure_hpa <= 1000.0)) {
      throw SchemaError("profile " + site_id + " " + hour.to_string() +
                        ": level pressure outside [800, 1000] hPa");
    }
    if (!std::isfinite(lv.geopotential)) {
      throw SchemaError("profile " + site_id + " " + hour.to_string() +
                        ": non-finite geopotential");
    }
    if (i > 0 && !(levels[i - 1].pressure_hpa > lv.pressure_hpa)) {
      throw SchemaError("profile " + site_id + " " + hour.to_string() +
                        ": levels not sorted by decreasing pressure");
    }
  }
}

void IcingProxyParams::validate() const {
  if (!(t_min_k < t_max_k)) throw DomainError("icing params: t_min >= t_max");
  if (!(lwc_min_g_m3 > 0.0)) throw DomainError("icing params: lwc_min <= 0");
  if (!(lapse_k_per_km > 0.0)) throw DomainError("icing params: lapse <= 0");
  window.validate();
}

double shear_exponent(double v10, double v100) {
  if (!(v10 > 0.0) || !(v100 > 0.0)) {
    throw DomainError("shear_exponent: nonpositive anchor speed");
  }
  return std::log(v100 / v10) / std::log(10.0);
}

double wind_at_height(double v10, double v100, double z_agl_m) {
  if (!(z_agl_m > 0.0)) throw DomainError("wind_at_height: height must be > 0");
  if (!(v10 > 0.0) || !(v100 > 0.0)) {
    // Degenerate profile: constant extrapolation of the 10 m speed.
    return std::max(v10, 0.0);
  }
  const double alpha = shear_exponent(v10, v100);
  return std::max(v10 * std::pow(z_agl_m / 10.0, alpha), 0.0);
}

double temp_at_height(double t2m_k, double z_agl_m, double lapse_k_per_km) {
  if (z_agl_m < 0.0) throw DomainError("temp_at_height: negative height");
  return t2m_k - lapse_k_per_km * z_agl_m / 1000.0;
}

double air_density(const SiteProfile& profile, double z_agl_m,
                   double lapse_k_per_km) {
  const double t_z = temp_at_height(profile.t2m_k, z_agl_m, lapse_k_per_km);
  const double t_mean = 0.5 * (profile.t2m_k + t_z);
  const double p_z = profile.sp_pa *
                     std::exp(-kGravity * z_agl_m / (kDryAirGasConstant * t_mean));
  return p_z / (kDryAirGasConstant * t_z);
}

double lwc_at_height(const SiteProfile& profile, const Site& site,
                     const IcingProxyParams& params) {
  if (profile.levels.empty()) {
    throw SchemaError("profile " + profile.site_id + " " +
                      profile.hour.to_string() + ": no pressure levels");
  }
  const double site_z_asl =
      profile.z_sfc_geopot / kGravity + site.sensor_height_agl_m;

  // Levels run from high to low pressure, so height ascends with index.
  double clwc = 0.0;
  const auto height_of = [](const ProfileLevel& lv) {
    return lv.geopotential / kGravity;
  };
  const ProfileLevel& lowest = profile.levels.front();
  const ProfileLevel& highest = profile.levels.back();
  if (site_z_asl <= height_of(lowest)) {
    clwc = lowest.clwc_kg_kg;
  } else if (site_z_asl >= height_of(highest)) {
    clwc = highest.clwc_kg_kg;
  } else {
    for (std::size_t i = 1; i < profile.levels.size(); ++i) {
      const ProfileLevel& lo = profile.levels[i - 1];
      const ProfileLevel& hi = profile.levels[i];
      const double z_lo = height_of(lo);
      const double z_hi = height_of(hi);
      if (site_z_asl >= z_lo && site_z_asl <= z_hi) {
        const double w = (z_hi == z_lo)
                             ? 0.0
                             : (site_z_asl - z_lo) / (z_hi - z_lo);
        clwc = lo.clwc_kg_kg + w * (hi.clwc_kg_kg - lo.clwc_kg_kg);
        break;
      }
    }
  }
  return clwc * air_density(profile, site.sensor_height_agl_m,
                            params.lapse_k_per_km);
}

bool icing_feasible(double wind_ms, double temp_k, double lwc_kg_m3,
                    const IcingProxyParams& params) {
  const double lwc_min_kg_m3 = params.lwc_min_g_m3 * 1.0e-3;
  return wind_ms > 0.0 && temp_k >= params.t_min_k && temp_k <= params.t_max_k &&
         lwc_kg_m3 > lwc_min_kg_m3;
}

double proxy_rate(double wind_ms, double temp_k, double lwc_kg_m3,
                  const IcingProxyParams& params) {
  if (!icing_feasible(wind_ms, temp_k, lwc_kg_m3, params)) return 0.0;
  return wind_ms * (lwc_kg_m3 * 1.0e3);  // g m^-2 s^-1
}

ObservationSeries proxy_rate_series(std::span<const SiteProfile> profiles,
                                    const Site& site,
                                    const IcingProxyParams& params) {
  params.validate();
  std::vector<Sample> samples;
  samples.reserve(profiles.size());
  for (const SiteProfile& p : profiles) {
    if (p.site_id != site.site_id) {
      throw SchemaError("proxy_rate_series: profile site " + p.site_id +
                        " does not match " + site.site_id);
    }
    const double v = wind_at_height(p.wind10(), p.wind100(),
                                    site.sensor_height_agl_m);
    const double t = temp_at_height(p.t2m_k, site.sensor_height_agl_m,
                                    params.lapse_k_per_km);
    const double lwc = lwc_at_height(p, site, params);
    samples.push_back({p.hour, proxy_rate(v, t, lwc, params), Qc::valid});
  }
  return ObservationSeries(site.site_id, Variable::icing_rate,
                           std::move(samples));
}

std::optional<WindowedIndex> windowed_index(const ObservationSeries& rates,
                                            HourStamp start,
                                            const WindowSpec& spec,
                                            double threshold) {
  spec.validate();
  int available = 0;
  double score = 0.0;
  for (std::int64_t h = 0; h < spec.length_hours; ++h) {
    const Sample* s = rates.find(start + h);
    if (s == nullptr || s->qc != Qc::valid) continue;
    ++available;
    score += s->value;
  }
  const double coverage =
      static_cast<double>(available) / static_cast<double>(spec.length_hours);
  if (coverage < spec.coverage_min) return std::nullopt;
  return WindowedIndex{score, score > threshold ? 1 : 0};
}

double percentile_matched_threshold(std::vector<double> window_scores,
                                    double train_base_rate) {
  if (window_scores.empty()) {
    throw DomainError("percentile_matched_threshold: empty score population");
  }
  if (!(train_base_rate > 0.0 && train_base_rate < 1.0)) {
    throw DomainError("percentile_matched_threshold: base rate outside (0, 1)");
  }
  std::sort(window_scores.begin(), window_scores.end());
  const double quantile = 1.0 - train_base_rate;
  const auto n = static_cast<std::int64_t>(window_scores.size());
  std::int64_t index =
      static_cast<std::int64_t>(std::ceil(quantile * static_cast<double>(n))) - 1;
  index = std::clamp<std::int64_t>(index, 0, n - 1);
  return window_scores[static_cast<std::size_t>(index)];
}

}  // namespace gridwx
