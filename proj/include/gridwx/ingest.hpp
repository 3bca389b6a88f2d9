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
#include <vector>

#include "gridwx/csv.hpp"
#include "gridwx/decide.hpp"
#include "gridwx/labels.hpp"
#include "gridwx/makkonen.hpp"
#include "gridwx/timebase.hpp"

namespace gridwx {

// Interchange schemas. All files are headered CSV, hours ISO 8601
// YYYY-MM-DDTHH:00:00Z, floats written at 9 significant digits so that
// load-then-serialize round trips byte-identically.
//
//   sites:        site_id,lat,lon,elevation_asl_m,sensor_height_agl_m,kind,helicopter_access
//   observations: site_id,variable,hour_utc,value,qc
//   forecasts:    model_id,site_id,variable,issue_utc,valid_utc,value
//   profiles:     site_id,hour_utc,p_hpa,z_geopot,clwc_kg_per_kg,
//                 t2m_k,d2m_k,u10,v10,u100,v100,sp_pa,z_sfc_geopot
//                 (one surface row per hour with p_hpa empty, level rows
//                 with the surface columns empty)
//   labels:       site_id,hour_utc,icing,qc
//   cycle counts: site_id,hour_utc,cycle_count
//   production:   farm_id,hour_utc,observed_kw,hub_wind_ms,hub_temp_k
//   power curve:  '#cut_in=' and '#cut_out=' metadata, then wind_ms,power_kw

/// Per-file quality-control accounting: kept + dropped = total, every
/// dropped row carries exactly one machine-readable reason code, flagged
/// rows are kept but excluded from valid use.
struct FileQc {
  std::size_t total_rows = 0;
  std::size_t kept = 0;
  std::map<std::string, std::size_t> dropped;  // reason -> count
  std::map<std::string, std::size_t> flagged;  // reason -> count
  std::size_t duplicates() const;
};

struct QcSummary {
  std::map<std::string, FileQc> files;  // path -> counts
  std::string to_json() const;
};

std::vector<Site> load_sites(const std::filesystem::path& path);
void write_sites(const std::filesystem::path& path, std::span<const Site> sites);

std::vector<ObservationSeries> load_observations(
    const std::filesystem::path& path, QcSummary& qc);
void write_observations(const std::filesystem::path& path,
                        std::span<const ObservationSeries> series);

std::vector<ForecastMatrix> load_forecasts(const std::filesystem::path& path,
                                           int cadence_h, QcSummary& qc);
void write_forecasts(const std::filesystem::path& path,
                     std::span<const ForecastMatrix> forecasts);

/// Profiles grouped per site, hours ascending.
std::map<std::string, std::vector<SiteProfile>> load_profiles(
    const std::filesystem::path& path, QcSummary& qc);
void write_profiles(const std::filesystem::path& path,
                    std::span<const SiteProfile> profiles);

std::vector<ObservationSeries> load_labels(const std::filesystem::path& path,
                                           QcSummary& qc);
void write_labels(const std::filesystem::path& path,
                  std::span<const ObservationSeries> series);

std::vector<CycleCounterSeries> load_cycle_counts(
    const std::filesystem::path& path, QcSummary& qc);
void write_cycle_counts(const std::filesystem::path& path,
                        std::span<const CycleCounterSeries> series);

std::vector<ProductionRecord> load_production(const std::filesystem::path& path,
                                              QcSummary& qc);
void write_production(const std::filesystem::path& path,
                      std::span<const ProductionRecord> records);

PowerCurve load_power_curve(const std::filesystem::path& path);
void write_power_curve(const std::filesystem::path& path,
                       const PowerCurve& curve);

struct CatalogEntry {
  std::string path;  // relative to the catalog file
  std::string hash;
};

/// Manifest of one dataset: relative paths plus content hashes, verified on
/// load. Site ids referenced anywhere must exist in the site table.
struct Catalog {
  std::filesystem::path root;
  std::string hash_algorithm = kHashAlgorithm;
  std::optional<CatalogEntry> sites;
  std::vector<CatalogEntry> observations;
  std::vector<CatalogEntry> forecasts;
  std::vector<CatalogEntry> profiles;
  std::vector<CatalogEntry> labels;
  std::vector<CatalogEntry> cycle_counts;
  std::vector<CatalogEntry> production;
  std::vector<CatalogEntry> power_curves;

  std::filesystem::path resolve(const CatalogEntry& entry) const;
};

Catalog load_catalog(const std::filesystem::path& path);  // verifies hashes
/// Computes hashes for every referenced file and writes catalog JSON.
void write_catalog(const std::filesystem::path& path, Catalog catalog);

/// Everything a pipeline run needs, loaded and cross-checked.
struct DataBundle {
  std::vector<Site> sites;
  std::vector<ObservationSeries> observations;
  std::vector<ForecastMatrix> forecasts;
  std::map<std::string, std::vector<SiteProfile>> profiles;
  std::vector<ObservationSeries> labels;
  std::vector<CycleCounterSeries> cycle_counts;
  std::vector<ProductionRecord> production;
  std::vector<PowerCurve> power_curves;
};

/// Which catalog categories a command actually needs; sites always load.
struct BundleSelect {
  bool observations = false;
  bool forecasts = false;
  bool profiles = false;
  bool labels = false;
  bool cycle_counts = false;
  bool production = false;
  bool power_curves = false;
  static BundleSelect all();
};

DataBundle load_bundle(const Catalog& catalog, int forecast_cadence_h,
                       QcSummary& qc, const BundleSelect& select = BundleSelect::all());

/// Flat key=value decision config. Unknown keys are rejected, omitted keys
/// take the defaults, and the effective values are echoed into run outputs.
struct RunConfig {
  DecisionParams params;
  std::vector<std::pair<std::string, std::string>> echo;
};

RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_defaults();
std::vector<std::pair<std::string, std::string>> effective_config(
    const DecisionParams& params);
void write_config(const std::filesystem::path& path,
                  const DecisionParams& params);

}  // namespace gridwx
