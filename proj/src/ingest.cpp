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

#include "gridwx/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "gridwx/csv.hpp"
#include "gridwx/errors.hpp"

namespace gridwx {

namespace {

std::string row_context(const CsvFile& csv, std::size_t row_index) {
  // +2: header line plus 1-based numbering; metadata lines shift real line
  // numbers but the row index is what matters for locating the problem.
  return csv.path.string() + " row " + std::to_string(row_index + 2);
}

FileQc& qc_for(QcSummary& qc, const std::filesystem::path& path) {
  return qc.files[path.string()];
}

bool in_band(double value, const std::pair<double, double>& band) {
  return value >= band.first && value <= band.second;
}

/// Identifiers end up in file names and report keys; keep them to a safe
/// alphabet.
void validate_id(std::string_view id, const std::string& ctx) {
  if (id.empty()) throw SchemaError(ctx + ": empty identifier");
  for (const char c : id) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    if (!ok) {
      throw SchemaError(ctx + ": identifier '" + std::string(id) +
                        "' has characters outside [A-Za-z0-9_.-]");
    }
  }
}

}  // namespace

std::size_t FileQc::duplicates() const {
  const auto it = dropped.find("duplicate_row");
  return it == dropped.end() ? 0 : it->second;
}

std::string QcSummary::to_json() const {
  nlohmann::json j;
  for (const auto& [path, fq] : files) {
    nlohmann::json entry;
    entry["total_rows"] = fq.total_rows;
    entry["kept"] = fq.kept;
    entry["dropped"] = fq.dropped;
    entry["flagged"] = fq.flagged;
    j[path] = std::move(entry);
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Sites

namespace {
constexpr const char* kSiteColumns[] = {
    "site_id", "lat",  "lon", "elevation_asl_m", "sensor_height_agl_m",
    "kind",    "helicopter_access"};
}

std::vector<Site> load_sites(const std::filesystem::path& path) {
  const CsvFile csv = read_csv(path);
  require_columns(csv, kSiteColumns);
  std::vector<Site> sites;
  std::map<std::string, std::size_t> seen;  // id -> first row
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& row = csv.rows[i];
    const std::string ctx = row_context(csv, i);
    if (row.size() != 7) throw SchemaError(ctx + ": wrong field count");
    Site site;
    site.site_id = row[0];
    validate_id(site.site_id, ctx);
    site.lat = parse_double_field(row[1], ctx + " lat");
    site.lon = parse_double_field(row[2], ctx + " lon");
    site.elevation_asl_m = parse_double_field(row[3], ctx + " elevation");
    site.kind = site_kind_from_string(row[5]);
    if (row[4].empty()) {
      site.sensor_height_agl_m = default_sensor_height(site.kind);
      site.height_defaulted = true;
    } else {
      site.sensor_height_agl_m = parse_double_field(row[4], ctx + " height");
    }
    const long long heli = parse_int_field(row[6], ctx + " helicopter_access");
    if (heli != 0 && heli != 1) {
      throw SchemaError(ctx + ": helicopter_access must be 0 or 1");
    }
    site.helicopter_access = heli == 1;
    if (const auto it = seen.find(site.site_id); it != seen.end()) {
      throw SchemaError(path.string() + ": duplicate site_id '" + site.site_id +
                        "' at rows " + std::to_string(it->second + 2) + " and " +
                        std::to_string(i + 2));
    }
    seen[site.site_id] = i;
    site.validate();
    sites.push_back(std::move(site));
  }
  return sites;
}

void write_sites(const std::filesystem::path& path,
                 std::span<const Site> sites) {
  CsvWriter w(path);
  w.row({"site_id", "lat", "lon", "elevation_asl_m", "sensor_height_agl_m",
         "kind", "helicopter_access"});
  for (const Site& s : sites) {
    w.row({s.site_id, format_double(s.lat), format_double(s.lon),
           format_double(s.elevation_asl_m),
           format_double(s.sensor_height_agl_m), std::string(to_string(s.kind)),
           s.helicopter_access ? "1" : "0"});
  }
}

// ---------------------------------------------------------------------------
// Observation-like series

namespace {

struct SeriesAccumulator {
  std::vector<Sample> samples;
  std::string_view last_raw;  // valid while the reader's buffer lives
};

/// Shared assembly for observation and label files: enforces monotone time,
/// dedupes byte-identical rows, rejects conflicting duplicates.
void append_sample(SeriesAccumulator& acc, std::string_view series_key,
                   std::string_view raw_row, Sample sample,
                   const std::string& ctx, FileQc& fq) {
  if (!acc.samples.empty()) {
    const Sample& last = acc.samples.back();
    if (sample.hour == last.hour) {
      if (raw_row == acc.last_raw) {
        ++fq.dropped["duplicate_row"];
        return;
      }
      throw SchemaError(ctx + ": conflicting duplicate hour for " +
                        std::string(series_key));
    }
    if (sample.hour < last.hour) {
      throw SchemaError(ctx + ": timestamps not increasing for " +
                        std::string(series_key));
    }
  }
  acc.samples.push_back(sample);
  acc.last_raw = raw_row;
  ++fq.kept;
}

std::string_view whole_row(std::span<const std::string_view> fields) {
  if (fields.empty()) return {};
  const char* begin = fields.front().data();
  const char* end = fields.back().data() + fields.back().size();
  return std::string_view(begin, static_cast<std::size_t>(end - begin));
}

}  // namespace

std::vector<ObservationSeries> load_observations(
    const std::filesystem::path& path, QcSummary& qc) {
  static constexpr const char* kColumns[] = {"site_id", "variable", "hour_utc",
                                             "value", "qc"};
  CsvReader reader(path);
  reader.require(kColumns);
  FileQc& fq = qc_for(qc, path);

  std::map<std::pair<std::string, Variable>, SeriesAccumulator> groups;
  SeriesAccumulator* current = nullptr;
  std::string current_site;
  Variable current_var = Variable::t2m;
  reader.for_each_row([&](std::span<const std::string_view> row,
                          std::size_t i) {
    ++fq.total_rows;
    const Variable var = variable_from_string(row[1]);
    Sample s;
    s.hour = HourStamp::parse(row[2]);
    s.value = parse_double_field(row[3], reader.row_context(i) + " value");
    s.qc = qc_from_string(row[4]);
    if (s.qc == Qc::valid) {
      if (!in_band(s.value, sanity_band(var))) {
        s.qc = Qc::suspect;
        ++fq.flagged["out_of_range"];
      } else if (var == Variable::icing && s.value != 0.0 && s.value != 1.0) {
        s.qc = Qc::suspect;
        ++fq.flagged["not_binary"];
      }
    }
    if (current == nullptr || row[0] != current_site || var != current_var) {
      validate_id(row[0], reader.row_context(i));
      current_site = std::string(row[0]);
      current_var = var;
      current = &groups[{current_site, var}];
    }
    append_sample(*current, current_site, whole_row(row), s,
                  reader.row_context(i), fq);
  });

  std::vector<ObservationSeries> out;
  out.reserve(groups.size());
  for (auto& [key, acc] : groups) {
    out.emplace_back(key.first, key.second, std::move(acc.samples));
  }
  return out;
}

void write_observations(const std::filesystem::path& path,
                        std::span<const ObservationSeries> series) {
  CsvWriter w(path);
  w.row({"site_id", "variable", "hour_utc", "value", "qc"});
  for (const ObservationSeries& s : series) {
    for (const Sample& sample : s.samples()) {
      w.row({s.site_id(), std::string(to_string(s.variable())),
             sample.hour.to_string(), format_double(sample.value),
             std::string(to_string(sample.qc))});
    }
  }
}

std::vector<ObservationSeries> load_labels(const std::filesystem::path& path,
                                           QcSummary& qc) {
  static constexpr const char* kColumns[] = {"site_id", "hour_utc", "icing",
                                             "qc"};
  CsvReader reader(path);
  reader.require(kColumns);
  FileQc& fq = qc_for(qc, path);

  std::map<std::string, SeriesAccumulator> groups;
  SeriesAccumulator* current = nullptr;
  std::string current_site;
  reader.for_each_row([&](std::span<const std::string_view> row,
                          std::size_t i) {
    ++fq.total_rows;
    Sample s;
    s.hour = HourStamp::parse(row[1]);
    if (row[2] == "0") s.value = 0.0;
    else if (row[2] == "1") s.value = 1.0;
    else throw SchemaError(reader.row_context(i) + ": icing must be 0 or 1");
    s.qc = qc_from_string(row[3]);
    if (current == nullptr || row[0] != current_site) {
      validate_id(row[0], reader.row_context(i));
      current_site = std::string(row[0]);
      current = &groups[current_site];
    }
    append_sample(*current, current_site, whole_row(row), s,
                  reader.row_context(i), fq);
  });

  std::vector<ObservationSeries> out;
  out.reserve(groups.size());
  for (auto& [site, acc] : groups) {
    out.emplace_back(site, Variable::icing, std::move(acc.samples));
  }
  return out;
}

void write_labels(const std::filesystem::path& path,
                  std::span<const ObservationSeries> series) {
  CsvWriter w(path);
  w.row({"site_id", "hour_utc", "icing", "qc"});
  for (const ObservationSeries& s : series) {
    for (const Sample& sample : s.samples()) {
      w.row({s.site_id(), sample.hour.to_string(),
             format_int(static_cast<long long>(sample.value)),
             std::string(to_string(sample.qc))});
    }
  }
}

// ---------------------------------------------------------------------------
// Forecasts

std::vector<ForecastMatrix> load_forecasts(const std::filesystem::path& path,
                                           int cadence_h, QcSummary& qc) {
  static constexpr const char* kColumns[] = {"model_id",  "site_id", "variable",
                                             "issue_utc", "valid_utc", "value"};
  CsvReader reader(path);
  reader.require(kColumns);
  FileQc& fq = qc_for(qc, path);

  std::map<std::tuple<std::string, std::string, Variable>,
           std::vector<ForecastCell>> groups;
  std::vector<ForecastCell>* current = nullptr;
  std::string current_model;
  std::string current_site;
  Variable current_var = Variable::t2m;
  reader.for_each_row([&](std::span<const std::string_view> row,
                          std::size_t i) {
    ++fq.total_rows;
    const Variable var = variable_from_string(row[2]);
    ForecastCell cell;
    cell.issue = HourStamp::parse(row[3]);
    cell.valid = HourStamp::parse(row[4]);
    cell.value = parse_double_field(row[5], reader.row_context(i) + " value");
    if (!in_band(cell.value, sanity_band(var))) {
      ++fq.dropped["out_of_range"];
      return;
    }
    if (current == nullptr || row[0] != current_model ||
        row[1] != current_site || var != current_var) {
      validate_id(row[0], reader.row_context(i));
      validate_id(row[1], reader.row_context(i));
      current_model = std::string(row[0]);
      current_site = std::string(row[1]);
      current_var = var;
      current = &groups[{current_model, current_site, var}];
    }
    current->push_back(cell);
    ++fq.kept;
  });

  std::vector<ForecastMatrix> out;
  out.reserve(groups.size());
  for (auto& [key, cells] : groups) {
    // Byte-identical duplicate cells dedupe; conflicting values are errors.
    std::sort(cells.begin(), cells.end(),
              [](const ForecastCell& a, const ForecastCell& b) {
                if (a.issue != b.issue) return a.issue < b.issue;
                return a.valid < b.valid;
              });
    std::vector<ForecastCell> unique_cells;
    unique_cells.reserve(cells.size());
    for (const ForecastCell& cell : cells) {
      if (!unique_cells.empty() && unique_cells.back().issue == cell.issue &&
          unique_cells.back().valid == cell.valid) {
        if (unique_cells.back().value == cell.value) {
          ++fq.dropped["duplicate_row"];
          --fq.kept;
          continue;
        }
        throw SchemaError(path.string() + ": conflicting forecast cells for " +
                          std::get<0>(key) + "/" + std::get<1>(key) + " at " +
                          cell.issue.to_string() + " -> " +
                          cell.valid.to_string());
      }
      unique_cells.push_back(cell);
    }
    out.emplace_back(std::get<0>(key), std::get<1>(key), std::get<2>(key),
                     cadence_h, std::move(unique_cells));
  }
  return out;
}

void write_forecasts(const std::filesystem::path& path,
                     std::span<const ForecastMatrix> forecasts) {
  CsvWriter w(path);
  w.row({"model_id", "site_id", "variable", "issue_utc", "valid_utc", "value"});
  for (const ForecastMatrix& fc : forecasts) {
    for (const ForecastCell& c : fc.cells()) {
      w.row({fc.model_id(), fc.site_id(), std::string(to_string(fc.variable())),
             c.issue.to_string(), c.valid.to_string(), format_double(c.value)});
    }
  }
}

// ---------------------------------------------------------------------------
// Profiles

namespace {
constexpr const char* kProfileColumns[] = {
    "site_id", "hour_utc", "p_hpa", "z_geopot", "clwc_kg_per_kg",
    "t2m_k",   "d2m_k",    "u10",   "v10",      "u100",
    "v100",    "sp_pa",    "z_sfc_geopot"};
}

std::map<std::string, std::vector<SiteProfile>> load_profiles(
    const std::filesystem::path& path, QcSummary& qc) {
  CsvReader reader(path);
  reader.require(kProfileColumns);
  FileQc& fq = qc_for(qc, path);

  struct PendingLevel {
    std::string site_id;
    HourStamp hour;
    ProfileLevel level;
  };
  std::map<std::pair<std::string, HourStamp>, SiteProfile> by_key;
  std::vector<PendingLevel> pending;
  std::string current_site;

  reader.for_each_row([&](std::span<const std::string_view> row,
                          std::size_t i) {
    ++fq.total_rows;
    const std::string ctx = reader.row_context(i);
    if (row[0] != current_site) {
      validate_id(row[0], ctx);
      current_site = std::string(row[0]);
    }
    const HourStamp hour = HourStamp::parse(row[1]);
    if (row[2].empty()) {
      SiteProfile profile;
      profile.site_id = current_site;
      profile.hour = hour;
      profile.t2m_k = parse_double_field(row[5], ctx + " t2m_k");
      profile.d2m_k = parse_double_field(row[6], ctx + " d2m_k");
      profile.u10 = parse_double_field(row[7], ctx + " u10");
      profile.v10 = parse_double_field(row[8], ctx + " v10");
      profile.u100 = parse_double_field(row[9], ctx + " u100");
      profile.v100 = parse_double_field(row[10], ctx + " v100");
      profile.sp_pa = parse_double_field(row[11], ctx + " sp_pa");
      profile.z_sfc_geopot = parse_double_field(row[12], ctx + " z_sfc_geopot");
      // Dewpoint rides along unused by the physics, but it is still QCed.
      if (!in_band(profile.t2m_k, sanity_band(Variable::t2m)) ||
          !in_band(profile.d2m_k, sanity_band(Variable::t2m)) ||
          profile.sp_pa <= 0.0) {
        ++fq.dropped["out_of_range"];
        return;
      }
      const auto [it, inserted] =
          by_key.try_emplace({current_site, hour}, std::move(profile));
      if (!inserted) {
        const SiteProfile& a = it->second;
        const SiteProfile& b = profile;
        const bool identical = a.t2m_k == b.t2m_k && a.d2m_k == b.d2m_k &&
                               a.u10 == b.u10 && a.v10 == b.v10 &&
                               a.u100 == b.u100 && a.v100 == b.v100 &&
                               a.sp_pa == b.sp_pa &&
                               a.z_sfc_geopot == b.z_sfc_geopot;
        if (identical) {
          ++fq.dropped["duplicate_row"];
          return;
        }
        throw SchemaError(ctx + ": conflicting surface row for " +
                          current_site + " at " + hour.to_string());
      }
      ++fq.kept;
    } else {
      ProfileLevel level;
      level.pressure_hpa = parse_double_field(row[2], ctx + " p_hpa");
      level.geopotential = parse_double_field(row[3], ctx + " z_geopot");
      level.clwc_kg_kg = parse_double_field(row[4], ctx + " clwc_kg_per_kg");
      if (!(level.pressure_hpa >= 800.0 && level.pressure_hpa <= 1000.0) ||
          level.clwc_kg_kg < 0.0 || !std::isfinite(level.geopotential)) {
        ++fq.dropped["out_of_range"];
        return;
      }
      pending.push_back({current_site, hour, level});
    }
  });

  for (const PendingLevel& p : pending) {
    const auto it = by_key.find({p.site_id, p.hour});
    if (it == by_key.end()) {
      ++fq.dropped["orphan_level"];
      continue;
    }
    it->second.levels.push_back(p.level);
    ++fq.kept;
  }

  std::map<std::string, std::vector<SiteProfile>> out;
  for (auto& [key, profile] : by_key) {
    std::sort(profile.levels.begin(), profile.levels.end(),
              [](const ProfileLevel& a, const ProfileLevel& b) {
                return a.pressure_hpa > b.pressure_hpa;
              });
    std::vector<ProfileLevel> unique_levels;
    unique_levels.reserve(profile.levels.size());
    for (const ProfileLevel& level : profile.levels) {
      if (!unique_levels.empty() &&
          unique_levels.back().pressure_hpa == level.pressure_hpa) {
        if (unique_levels.back().geopotential == level.geopotential &&
            unique_levels.back().clwc_kg_kg == level.clwc_kg_kg) {
          ++fq.dropped["duplicate_row"];
          --fq.kept;
          continue;
        }
        throw SchemaError(path.string() + ": conflicting level rows for " +
                          key.first + " at " + key.second.to_string());
      }
      unique_levels.push_back(level);
    }
    profile.levels = std::move(unique_levels);
    profile.validate();
    out[key.first].push_back(std::move(profile));
  }
  return out;  // map iteration gives hours ascending per site
}

void write_profiles(const std::filesystem::path& path,
                    std::span<const SiteProfile> profiles) {
  CsvWriter w(path);
  w.row({"site_id", "hour_utc", "p_hpa", "z_geopot", "clwc_kg_per_kg", "t2m_k",
         "d2m_k", "u10", "v10", "u100", "v100", "sp_pa", "z_sfc_geopot"});
  for (const SiteProfile& p : profiles) {
    w.row({p.site_id, p.hour.to_string(), "", "", "", format_double(p.t2m_k),
           format_double(p.d2m_k), format_double(p.u10), format_double(p.v10),
           format_double(p.u100), format_double(p.v100), format_double(p.sp_pa),
           format_double(p.z_sfc_geopot)});
    for (const ProfileLevel& lv : p.levels) {
      w.row({p.site_id, p.hour.to_string(), format_double(lv.pressure_hpa),
             format_double(lv.geopotential), format_double(lv.clwc_kg_kg), "",
             "", "", "", "", "", "", ""});
    }
  }
}

// ---------------------------------------------------------------------------
// Cycle counters and production

std::vector<CycleCounterSeries> load_cycle_counts(
    const std::filesystem::path& path, QcSummary& qc) {
  static constexpr const char* kColumns[] = {"site_id", "hour_utc",
                                             "cycle_count"};
  CsvReader reader(path);
  reader.require(kColumns);
  FileQc& fq = qc_for(qc, path);

  struct Acc {
    std::vector<std::pair<HourStamp, long long>> samples;
    std::string_view last_raw;
  };
  std::map<std::string, Acc> groups;
  Acc* current = nullptr;
  std::string current_site;
  reader.for_each_row([&](std::span<const std::string_view> row,
                          std::size_t i) {
    ++fq.total_rows;
    const std::string ctx = reader.row_context(i);
    const HourStamp hour = HourStamp::parse(row[1]);
    const long long count = parse_int_field(row[2], ctx + " cycle_count");
    if (count < 0) {
      ++fq.dropped["negative_count"];
      return;
    }
    if (current == nullptr || row[0] != current_site) {
      validate_id(row[0], ctx);
      current_site = std::string(row[0]);
      current = &groups[current_site];
    }
    const std::string_view raw = whole_row(row);
    if (!current->samples.empty()) {
      if (hour == current->samples.back().first) {
        if (raw == current->last_raw) {
          ++fq.dropped["duplicate_row"];
          return;
        }
        throw SchemaError(ctx + ": conflicting duplicate hour for " +
                          current_site);
      }
      if (hour < current->samples.back().first) {
        throw SchemaError(ctx + ": timestamps not increasing for " +
                          current_site);
      }
    }
    current->samples.emplace_back(hour, count);
    current->last_raw = raw;
    ++fq.kept;
  });

  std::vector<CycleCounterSeries> out;
  for (auto& [site, acc] : groups) {
    CycleCounterSeries series;
    series.site_id = site;
    series.samples = std::move(acc.samples);
    series.validate();
    out.push_back(std::move(series));
  }
  return out;
}

void write_cycle_counts(const std::filesystem::path& path,
                        std::span<const CycleCounterSeries> series) {
  CsvWriter w(path);
  w.row({"site_id", "hour_utc", "cycle_count"});
  for (const CycleCounterSeries& s : series) {
    for (const auto& [hour, count] : s.samples) {
      w.row({s.site_id, hour.to_string(), format_int(count)});
    }
  }
}

std::vector<ProductionRecord> load_production(const std::filesystem::path& path,
                                              QcSummary& qc) {
  static constexpr const char* kColumns[] = {"farm_id", "hour_utc",
                                             "observed_kw", "hub_wind_ms",
                                             "hub_temp_k"};
  CsvReader reader(path);
  reader.require(kColumns);
  FileQc& fq = qc_for(qc, path);

  std::vector<ProductionRecord> out;
  std::map<std::string, std::pair<HourStamp, std::string_view>> last_by_farm;
  std::string current_farm;
  reader.for_each_row([&](std::span<const std::string_view> row,
                          std::size_t i) {
    ++fq.total_rows;
    const std::string ctx = reader.row_context(i);
    if (row[0] != current_farm) {
      validate_id(row[0], ctx);
      current_farm = std::string(row[0]);
    }
    ProductionRecord rec;
    rec.farm_id = current_farm;
    rec.hour = HourStamp::parse(row[1]);
    rec.observed_kw = parse_double_field(row[2], ctx + " observed_kw");
    rec.hub_wind_ms = parse_double_field(row[3], ctx + " hub_wind_ms");
    rec.hub_temp_k = parse_double_field(row[4], ctx + " hub_temp_k");
    if (rec.observed_kw < 0.0 ||
        !in_band(rec.hub_wind_ms, sanity_band(Variable::wind)) ||
        !in_band(rec.hub_temp_k, sanity_band(Variable::t2m))) {
      ++fq.dropped["out_of_range"];
      return;
    }
    const std::string_view raw = whole_row(row);
    if (const auto it = last_by_farm.find(rec.farm_id);
        it != last_by_farm.end() && !(it->second.first < rec.hour)) {
      if (rec.hour == it->second.first && raw == it->second.second) {
        ++fq.dropped["duplicate_row"];
        return;
      }
      throw SchemaError(ctx + ": timestamps not increasing for " + rec.farm_id);
    }
    last_by_farm[rec.farm_id] = {rec.hour, raw};
    out.push_back(std::move(rec));
    ++fq.kept;
  });
  return out;
}

void write_production(const std::filesystem::path& path,
                      std::span<const ProductionRecord> records) {
  CsvWriter w(path);
  w.row({"farm_id", "hour_utc", "observed_kw", "hub_wind_ms", "hub_temp_k"});
  for (const ProductionRecord& r : records) {
    w.row({r.farm_id, r.hour.to_string(), format_double(r.observed_kw),
           format_double(r.hub_wind_ms), format_double(r.hub_temp_k)});
  }
}

PowerCurve load_power_curve(const std::filesystem::path& path) {
  static constexpr const char* kColumns[] = {"wind_ms", "power_kw"};
  const CsvFile csv = read_csv(path);
  require_columns(csv, kColumns);
  std::optional<double> cut_in;
  double cut_out = 25.0;
  for (const std::string& meta : csv.meta) {
    if (meta.rfind("cut_in=", 0) == 0) {
      cut_in = parse_double_field(meta.substr(7), path.string() + " cut_in");
    } else if (meta.rfind("cut_out=", 0) == 0) {
      cut_out = parse_double_field(meta.substr(8), path.string() + " cut_out");
    } else {
      throw SchemaError(path.string() + ": unknown metadata '#" + meta + "'");
    }
  }
  if (!cut_in) throw SchemaError(path.string() + ": missing #cut_in= metadata");
  std::vector<PowerCurvePoint> points;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& row = csv.rows[i];
    const std::string ctx = row_context(csv, i);
    if (row.size() != 2) throw SchemaError(ctx + ": wrong field count");
    points.push_back({parse_double_field(row[0], ctx + " wind_ms"),
                      parse_double_field(row[1], ctx + " power_kw")});
  }
  return PowerCurve(std::move(points), *cut_in, cut_out);
}

void write_power_curve(const std::filesystem::path& path,
                       const PowerCurve& curve) {
  CsvWriter w(path);
  w.meta("cut_in=" + format_double(curve.cut_in()));
  w.meta("cut_out=" + format_double(curve.cut_out()));
  w.row({"wind_ms", "power_kw"});
  for (const PowerCurvePoint& p : curve.points()) {
    w.row({format_double(p.wind_ms), format_double(p.power_kw)});
  }
}

// ---------------------------------------------------------------------------
// Catalog

std::filesystem::path Catalog::resolve(const CatalogEntry& entry) const {
  return root / entry.path;
}

namespace {

std::vector<CatalogEntry> entries_from_json(const nlohmann::json& j,
                                            const std::string& key) {
  std::vector<CatalogEntry> out;
  if (!j.contains(key)) return out;
  for (const auto& item : j.at(key)) {
    out.push_back({item.at("path").get<std::string>(),
                   item.at("hash").get<std::string>()});
  }
  return out;
}

nlohmann::json entries_to_json(const Catalog& catalog,
                               const std::vector<CatalogEntry>& entries) {
  nlohmann::json out = nlohmann::json::array();
  for (const CatalogEntry& e : entries) {
    out.push_back({{"path", e.path},
                   {"hash", fnv1a64_hex_file(catalog.resolve(e))}});
  }
  return out;
}

void verify_entry(const Catalog& catalog, const CatalogEntry& entry) {
  const std::filesystem::path p = catalog.resolve(entry);
  if (!std::filesystem::exists(p)) {
    throw SchemaError("catalog: missing file " + p.string());
  }
  const std::string hash = fnv1a64_hex_file(p);
  if (hash != entry.hash) {
    throw SchemaError("catalog: hash mismatch for " + p.string() +
                      " (manifest " + entry.hash + ", file " + hash + ")");
  }
}

}  // namespace

Catalog load_catalog(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  Catalog catalog;
  catalog.root = path.parent_path();
  try {
    catalog.hash_algorithm = j.at("hash_algorithm").get<std::string>();
    if (catalog.hash_algorithm != kHashAlgorithm) {
      throw SchemaError(path.string() + ": unsupported hash algorithm '" +
                        catalog.hash_algorithm + "'");
    }
    if (j.contains("sites")) {
      catalog.sites = CatalogEntry{j.at("sites").at("path").get<std::string>(),
                                   j.at("sites").at("hash").get<std::string>()};
    }
    catalog.observations = entries_from_json(j, "observations");
    catalog.forecasts = entries_from_json(j, "forecasts");
    catalog.profiles = entries_from_json(j, "profiles");
    catalog.labels = entries_from_json(j, "labels");
    catalog.cycle_counts = entries_from_json(j, "cycle_counts");
    catalog.production = entries_from_json(j, "production");
    catalog.power_curves = entries_from_json(j, "power_curves");
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }

  if (catalog.sites) verify_entry(catalog, *catalog.sites);
  for (const auto* list :
       {&catalog.observations, &catalog.forecasts, &catalog.profiles,
        &catalog.labels, &catalog.cycle_counts, &catalog.production,
        &catalog.power_curves}) {
    for (const CatalogEntry& e : *list) verify_entry(catalog, e);
  }
  return catalog;
}

void write_catalog(const std::filesystem::path& path, Catalog catalog) {
  if (catalog.root.empty()) catalog.root = path.parent_path();
  nlohmann::json j;
  j["hash_algorithm"] = kHashAlgorithm;
  if (catalog.sites) {
    j["sites"] = {{"path", catalog.sites->path},
                  {"hash", fnv1a64_hex_file(catalog.resolve(*catalog.sites))}};
  }
  j["observations"] = entries_to_json(catalog, catalog.observations);
  j["forecasts"] = entries_to_json(catalog, catalog.forecasts);
  j["profiles"] = entries_to_json(catalog, catalog.profiles);
  j["labels"] = entries_to_json(catalog, catalog.labels);
  j["cycle_counts"] = entries_to_json(catalog, catalog.cycle_counts);
  j["production"] = entries_to_json(catalog, catalog.production);
  j["power_curves"] = entries_to_json(catalog, catalog.power_curves);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write catalog " + path.string());
  out << j.dump(2) << "\n";
}

BundleSelect BundleSelect::all() {
  BundleSelect s;
  s.observations = s.forecasts = s.profiles = s.labels = s.cycle_counts =
      s.production = s.power_curves = true;
  return s;
}

namespace {

/// QC summaries key files by their catalog-relative path so reports do not
/// depend on where the dataset happens to live.
void rekey_qc(QcSummary& qc, const Catalog& catalog, const CatalogEntry& e) {
  const std::string absolute = catalog.resolve(e).string();
  const auto it = qc.files.find(absolute);
  if (it == qc.files.end()) return;
  FileQc moved = std::move(it->second);
  qc.files.erase(it);
  qc.files[e.path] = std::move(moved);
}

}  // namespace

DataBundle load_bundle(const Catalog& catalog, int forecast_cadence_h,
                       QcSummary& qc, const BundleSelect& select) {
  DataBundle bundle;
  if (catalog.sites) {
    bundle.sites = load_sites(catalog.resolve(*catalog.sites));
  }
  if (select.observations) {
    for (const CatalogEntry& e : catalog.observations) {
      auto series = load_observations(catalog.resolve(e), qc);
      for (auto& s : series) bundle.observations.push_back(std::move(s));
      rekey_qc(qc, catalog, e);
    }
  }
  if (select.forecasts) {
    for (const CatalogEntry& e : catalog.forecasts) {
      auto fcs = load_forecasts(catalog.resolve(e), forecast_cadence_h, qc);
      for (auto& f : fcs) bundle.forecasts.push_back(std::move(f));
      rekey_qc(qc, catalog, e);
    }
  }
  if (select.profiles) {
    for (const CatalogEntry& e : catalog.profiles) {
      auto profiles = load_profiles(catalog.resolve(e), qc);
      for (auto& [site, list] : profiles) {
        auto& dst = bundle.profiles[site];
        dst.insert(dst.end(), std::make_move_iterator(list.begin()),
                   std::make_move_iterator(list.end()));
      }
      rekey_qc(qc, catalog, e);
    }
  }
  if (select.labels) {
    for (const CatalogEntry& e : catalog.labels) {
      auto series = load_labels(catalog.resolve(e), qc);
      for (auto& s : series) bundle.labels.push_back(std::move(s));
      rekey_qc(qc, catalog, e);
    }
  }
  if (select.cycle_counts) {
    for (const CatalogEntry& e : catalog.cycle_counts) {
      auto series = load_cycle_counts(catalog.resolve(e), qc);
      for (auto& s : series) bundle.cycle_counts.push_back(std::move(s));
      rekey_qc(qc, catalog, e);
    }
  }
  if (select.production) {
    for (const CatalogEntry& e : catalog.production) {
      auto records = load_production(catalog.resolve(e), qc);
      for (auto& r : records) bundle.production.push_back(std::move(r));
      rekey_qc(qc, catalog, e);
    }
  }
  if (select.power_curves) {
    for (const CatalogEntry& e : catalog.power_curves) {
      bundle.power_curves.push_back(load_power_curve(catalog.resolve(e)));
    }
  }

  if (!bundle.sites.empty()) {
    std::set<std::string> ids;
    for (const Site& s : bundle.sites) ids.insert(s.site_id);
    const auto check = [&](const std::string& id, const char* what) {
      if (ids.count(id) == 0) {
        throw SchemaError(std::string("catalog: ") + what +
                          " references unknown site '" + id + "'");
      }
    };
    for (const auto& s : bundle.observations) check(s.site_id(), "observations");
    for (const auto& f : bundle.forecasts) check(f.site_id(), "forecasts");
    for (const auto& [site, _] : bundle.profiles) check(site, "profiles");
    for (const auto& l : bundle.labels) check(l.site_id(), "labels");
    for (const auto& c : bundle.cycle_counts) check(c.site_id, "cycle counts");
    for (const auto& p : bundle.production) check(p.farm_id, "production");
  }
  return bundle;
}

// ---------------------------------------------------------------------------
// Decision config

namespace {

std::string trim(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && (text[b] == ' ' || text[b] == '\t')) ++b;
  while (e > b && (text[e - 1] == ' ' || text[e - 1] == '\t' ||
                   text[e - 1] == '\r')) --e;
  return std::string(text.substr(b, e - b));
}

bool parse_bool_field(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw SchemaError("config key '" + key + "': expected boolean, got '" +
                    text + "'");
}

int parse_config_int(const std::string& text, const std::string& key) {
  const long long v = parse_int_field(text, "config key '" + key + "'");
  return static_cast<int>(v);
}

}  // namespace

RunConfig config_from_defaults() {
  RunConfig config;
  config.echo = effective_config(config.params);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  DecisionParams params;
  std::set<std::string> seen;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string line = trim(std::string_view(text).substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (eol == text.size() && line.empty()) break;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                        ": expected key=value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!seen.insert(key).second) {
      throw SchemaError(path.string() + ": duplicate key '" + key + "'");
    }
    const std::string ctx = "config key '" + key + "'";
    if (key == "c_d") params.c_d = parse_double_field(value, ctx);
    else if (key == "heli_adder") params.heli_adder = parse_double_field(value, ctx);
    else if (key == "alpha") params.alpha = parse_double_field(value, ctx);
    else if (key == "loss") params.loss = parse_double_field(value, ctx);
    else if (key == "window") params.window_h = parse_config_int(value, key);
    else if (key == "cadence") params.cadence_h = parse_config_int(value, key);
    else if (key == "tau") params.tau_h = parse_config_int(value, key);
    else if (key == "eta") params.eta = parse_double_field(value, ctx);
    else if (key == "p_on_factor") params.p_on_factor = parse_double_field(value, ctx);
    else if (key == "p_off_factor") params.p_off_factor = parse_double_field(value, ctx);
    else if (key == "persistence") params.persistence_k = parse_config_int(value, key);
    else if (key == "crews") params.crews = parse_config_int(value, key);
    else if (key == "crew_hours") params.crew_hours = parse_double_field(value, ctx);
    else if (key == "capacity") params.capacity = parse_bool_field(value, key);
    else throw SchemaError(path.string() + ": unknown key '" + key + "'");
  }
  params.validate();
  RunConfig config;
  config.params = params;
  config.echo = effective_config(params);
  return config;
}

std::vector<std::pair<std::string, std::string>> effective_config(
    const DecisionParams& params) {
  return {
      {"c_d", format_double(params.c_d)},
      {"heli_adder", format_double(params.heli_adder)},
      {"alpha", format_double(params.alpha)},
      {"loss", format_double(params.loss)},
      {"window", format_int(params.window_h)},
      {"cadence", format_int(params.cadence_h)},
      {"tau", format_int(params.tau_h)},
      {"eta", format_double(params.eta)},
      {"p_on_factor", format_double(params.p_on_factor)},
      {"p_off_factor", format_double(params.p_off_factor)},
      {"persistence", format_int(params.persistence_k)},
      {"crews", format_int(params.crews)},
      {"crew_hours", format_double(params.crew_hours)},
      {"capacity", params.capacity ? "true" : "false"},
  };
}

void write_config(const std::filesystem::path& path,
                  const DecisionParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write config " + path.string());
  for (const auto& [key, value] : effective_config(params)) {
    out << key << "=" << value << "\n";
  }
}

}  // namespace gridwx
