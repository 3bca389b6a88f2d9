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
#include <string_view>
#include <vector>

#include "gridwx/timebase.hpp"

namespace gridwx {

inline constexpr double kGravity = 9.80665;            // m s^-2
inline constexpr double kDryAirGasConstant = 287.05;   // J kg^-1 K^-1

enum class SiteKind { transmission, windfarm, station };

std::string_view to_string(SiteKind kind);
SiteKind site_kind_from_string(std::string_view text);

/// Sensor/hub height assumed when a site does not report one:
/// 80 m for wind farms, 50 m for transmission lines, 2 m for stations.
double default_sensor_height(SiteKind kind);

struct Site {
  std::string site_id;
  double lat = 0.0;
  double lon = 0.0;
  double elevation_asl_m = 0.0;
  double sensor_height_agl_m = 0.0;
  SiteKind kind = SiteKind::station;
  bool helicopter_access = false;
  bool height_defaulted = false;
  void validate() const;
};

struct ProfileLevel {
  double pressure_hpa = 0.0;
  double geopotential = 0.0;   // m^2 s^-2
  double clwc_kg_kg = 0.0;     // specific cloud liquid water content
};

/// One reanalysis-style column at a site and hour: surface fields plus
/// pressure levels in [800, 1000] hPa sorted by decreasing pressure.
struct SiteProfile {
  std::string site_id;
  HourStamp hour;
  double t2m_k = 0.0;
  double d2m_k = 0.0;  // carried through QC, unused by feasibility
  double u10 = 0.0, v10 = 0.0;
  double u100 = 0.0, v100 = 0.0;
  double sp_pa = 0.0;
  double z_sfc_geopot = 0.0;
  std::vector<ProfileLevel> levels;

  double wind10() const;
  double wind100() const;
  void validate() const;
};

struct IcingProxyParams {
  double t_min_k = 260.0;
  double t_max_k = 275.0;
  double lwc_min_g_m3 = 0.001;
  double lapse_k_per_km = 6.5;
  WindowSpec window{};
  void validate() const;
};

/// Power-law exponent ln(v100/v10)/ln(10); DomainError on a nonpositive
/// speed (wind_at_height substitutes a constant profile there).
double shear_exponent(double v10, double v100);

/// v10 * (z/10)^alpha, clamped at >= 0. Degenerate anchor speeds fall back
/// to alpha = 0, i.e. max(v10, 0) at every height.
double wind_at_height(double v10, double v100, double z_agl_m);

/// Constant-lapse extrapolation from 2 m temperature.
double temp_at_height(double t2m_k, double z_agl_m, double lapse_k_per_km);

/// Dry-air density at sensor height: rho = p(z) / (R_d T(z)) with p(z) from
/// the hypsometric relation off surface pressure.
double air_density(const SiteProfile& profile, double z_agl_m,
                   double lapse_k_per_km);

/// Volumetric cloud liquid water (kg m^-3) at the site's sensor height:
/// clwc interpolated linearly in geopotential-derived height between the
/// bracketing levels (clamped outside), times air density.
double lwc_at_height(const SiteProfile& profile, const Site& site,
                     const IcingProxyParams& params);

/// v > 0 (strict), T in [t_min, t_max] (closed), LWC > lwc_min (strict).
bool icing_feasible(double wind_ms, double temp_k, double lwc_kg_m3,
                    const IcingProxyParams& params);

/// Rate-of-icing proxy v * LWC in g m^-2 s^-1 when feasible, else 0.
double proxy_rate(double wind_ms, double temp_k, double lwc_kg_m3,
                  const IcingProxyParams& params);

/// Hourly proxy-rate series for one site; profiles must be sorted by hour.
ObservationSeries proxy_rate_series(std::span<const SiteProfile> profiles,
                                    const Site& site,
                                    const IcingProxyParams& params);

struct WindowedIndex {
  double score = 0.0;
  int flag = 0;
};

/// Sum of hourly rates over [start, start+window); flag = score > threshold.
/// nullopt when coverage is below the window's coverage_min.
std::optional<WindowedIndex> windowed_index(const ObservationSeries& rates,
                                            HourStamp start,
                                            const WindowSpec& spec,
                                            double threshold);

/// Threshold whose exceedance rate over the score population matches the
/// training base rate: the (1 - pi_train) empirical quantile.
double percentile_matched_threshold(std::vector<double> window_scores,
                                    double train_base_rate);

}  // namespace gridwx
