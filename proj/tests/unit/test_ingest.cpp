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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "gridwx/csv.hpp"
#include "gridwx/errors.hpp"
#include "gridwx/ingest.hpp"

using namespace gridwx;
namespace fs = std::filesystem;

namespace {

fs::path test_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gridwx_unit" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name,
                    const std::string& content) {
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("site loading fills kind-specific height defaults") {
  const fs::path dir = test_dir("sites");
  const fs::path path = write_file(
      dir, "sites.csv",
      "site_id,lat,lon,elevation_asl_m,sensor_height_agl_m,kind,helicopter_access\n"
      "WF1,50,-70,300,,windfarm,0\n"
      "TL1,51,-71,400,,transmission,1\n"
      "ST1,52,-72,100,10,station,0\n");
  const auto sites = load_sites(path);
  REQUIRE(sites.size() == 3);
  CHECK(sites[0].sensor_height_agl_m == 80.0);
  CHECK(sites[0].height_defaulted);
  CHECK(sites[1].sensor_height_agl_m == 50.0);
  CHECK(sites[1].height_defaulted);
  CHECK(sites[1].helicopter_access);
  CHECK(sites[2].sensor_height_agl_m == 10.0);
  CHECK_FALSE(sites[2].height_defaulted);

  SUBCASE("duplicate ids name both rows") {
    const fs::path dup = write_file(
        dir, "dup.csv",
        "site_id,lat,lon,elevation_asl_m,sensor_height_agl_m,kind,helicopter_access\n"
        "A,50,-70,0,10,station,0\n"
        "A,51,-71,0,10,station,0\n");
    try {
      load_sites(dup);
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      const std::string what = e.what();
      CHECK(what.find("rows 2 and 3") != std::string::npos);
    }
  }

  SUBCASE("out-of-range coordinates are hard errors") {
    const fs::path bad = write_file(
        dir, "bad.csv",
        "site_id,lat,lon,elevation_asl_m,sensor_height_agl_m,kind,helicopter_access\n"
        "A,95,-70,0,10,station,0\n");
    CHECK_THROWS_AS(load_sites(bad), SchemaError);
  }

  SUBCASE("identifiers outside the safe alphabet are rejected") {
    const fs::path bad = write_file(
        dir, "slash.csv",
        "site_id,lat,lon,elevation_asl_m,sensor_height_agl_m,kind,helicopter_access\n"
        "../evil,50,-70,0,10,station,0\n");
    CHECK_THROWS_AS(load_sites(bad), SchemaError);
  }
}

TEST_CASE("observation QC: range flags, dedup, hard errors") {
  const fs::path dir = test_dir("obs");

  SUBCASE("unphysical precipitation becomes suspect and is counted") {
    const fs::path path = write_file(
        dir, "obs.csv",
        "site_id,variable,hour_utc,value,qc\n"
        "A,precip,2024-01-01T00:00:00Z,-1,valid\n"
        "A,precip,2024-01-01T01:00:00Z,2,valid\n");
    QcSummary qc;
    const auto series = load_observations(path, qc);
    REQUIRE(series.size() == 1);
    CHECK(series[0].samples()[0].qc == Qc::suspect);
    CHECK(series[0].samples()[1].qc == Qc::valid);
    const FileQc& fq = qc.files.at(path.string());
    CHECK(fq.flagged.at("out_of_range") == 1);
    CHECK(fq.kept == 2);
    CHECK(fq.total_rows == 2);
  }

  SUBCASE("temperature outside the sanity band is suspect") {
    const fs::path path = write_file(
        dir, "hot.csv",
        "site_id,variable,hour_utc,value,qc\n"
        "A,t2m,2024-01-01T00:00:00Z,500,valid\n");
    QcSummary qc;
    const auto series = load_observations(path, qc);
    CHECK(series[0].samples()[0].qc == Qc::suspect);
  }

  SUBCASE("exact duplicate rows dedupe with a count") {
    const fs::path path = write_file(
        dir, "dup.csv",
        "site_id,variable,hour_utc,value,qc\n"
        "A,t2m,2024-01-01T00:00:00Z,270,valid\n"
        "A,t2m,2024-01-01T00:00:00Z,270,valid\n");
    QcSummary qc;
    const auto series = load_observations(path, qc);
    CHECK(series[0].size() == 1);
    const FileQc& fq = qc.files.at(path.string());
    CHECK(fq.dropped.at("duplicate_row") == 1);
    CHECK(fq.duplicates() == 1);
    CHECK(fq.kept + 1 == fq.total_rows);
  }

  SUBCASE("conflicting duplicate hours are hard errors") {
    const fs::path path = write_file(
        dir, "conflict.csv",
        "site_id,variable,hour_utc,value,qc\n"
        "A,t2m,2024-01-01T00:00:00Z,270,valid\n"
        "A,t2m,2024-01-01T00:00:00Z,271,valid\n");
    QcSummary qc;
    CHECK_THROWS_AS(load_observations(path, qc), SchemaError);
  }

  SUBCASE("header mismatch and bad timestamps are hard errors") {
    QcSummary qc;
    const fs::path bad_header = write_file(
        dir, "h.csv", "site,variable,hour_utc,value,qc\n");
    CHECK_THROWS_AS(load_observations(bad_header, qc), SchemaError);
    const fs::path bad_time = write_file(
        dir, "t.csv",
        "site_id,variable,hour_utc,value,qc\n"
        "A,t2m,2024-01-01 00:00,270,valid\n");
    CHECK_THROWS_AS(load_observations(bad_time, qc), SchemaError);
    const fs::path bad_var = write_file(
        dir, "v.csv",
        "site_id,variable,hour_utc,value,qc\n"
        "A,dewpoint,2024-01-01T00:00:00Z,270,valid\n");
    CHECK_THROWS_AS(load_observations(bad_var, qc), SchemaError);
  }

  SUBCASE("non-binary icing observations are flagged") {
    const fs::path path = write_file(
        dir, "icing.csv",
        "site_id,variable,hour_utc,value,qc\n"
        "A,icing,2024-01-01T00:00:00Z,0.5,valid\n");
    QcSummary qc;
    const auto series = load_observations(path, qc);
    CHECK(series[0].samples()[0].qc == Qc::suspect);
    CHECK(qc.files.at(path.string()).flagged.at("not_binary") == 1);
  }
}

TEST_CASE("canonical files round trip byte-identically") {
  const fs::path dir = test_dir("roundtrip");
  QcSummary qc;

  SUBCASE("observations") {
    std::vector<Sample> samples = {
        {HourStamp::parse("2024-01-01T00:00:00Z"), 270.123456789, Qc::valid},
        {HourStamp::parse("2024-01-01T01:00:00Z"), 1.0e-6, Qc::suspect},
        {HourStamp::parse("2024-01-01T02:00:00Z"), 271.0, Qc::missing},
    };
    std::vector<ObservationSeries> series;
    series.emplace_back("A", Variable::t2m, samples);
    const fs::path first = dir / "obs1.csv";
    write_observations(first, series);
    const auto loaded = load_observations(first, qc);
    const fs::path second = dir / "obs2.csv";
    write_observations(second, loaded);
    CHECK(read_text_file(first) == read_text_file(second));
  }

  SUBCASE("power curve keeps its metadata lines") {
    const PowerCurve curve({{4.0, 0.0}, {12.5, 2000.0}}, 4.0, 25.0);
    const fs::path first = dir / "pc1.csv";
    write_power_curve(first, curve);
    const PowerCurve loaded = load_power_curve(first);
    const fs::path second = dir / "pc2.csv";
    write_power_curve(second, loaded);
    CHECK(read_text_file(first) == read_text_file(second));
    CHECK(loaded.cut_in() == 4.0);
    CHECK(loaded.cut_out() == 25.0);
  }

  SUBCASE("profiles with surface and level rows") {
    SiteProfile p;
    p.site_id = "A";
    p.hour = HourStamp::parse("2024-01-01T00:00:00Z");
    p.t2m_k = 270.5;
    p.d2m_k = 268.25;
    p.u10 = 1.5;
    p.v10 = -2.5;
    p.u100 = 2.25;
    p.v100 = -3.75;
    p.sp_pa = 98765.4321;
    p.z_sfc_geopot = 4903.325;
    p.levels = {{1000.0, 1078.7315, 1.25e-6}, {900.0, 9702.52, 0.0}};
    const fs::path first = dir / "prof1.csv";
    write_profiles(first, std::vector<SiteProfile>{p});
    auto loaded = load_profiles(first, qc);
    REQUIRE(loaded.count("A") == 1);
    const fs::path second = dir / "prof2.csv";
    write_profiles(second, loaded.at("A"));
    CHECK(read_text_file(first) == read_text_file(second));
  }

  SUBCASE("forecasts and labels") {
    std::vector<ForecastCell> cells = {
        {HourStamp::parse("2024-01-01T00:00:00Z"),
         HourStamp::parse("2024-01-01T06:00:00Z"), 0.123456789},
    };
    std::vector<ForecastMatrix> fcs;
    fcs.emplace_back("m1", "A", Variable::icing, 6, cells);
    const fs::path first = dir / "fc1.csv";
    write_forecasts(first, fcs);
    const auto loaded = load_forecasts(first, 6, qc);
    const fs::path second = dir / "fc2.csv";
    write_forecasts(second, loaded);
    CHECK(read_text_file(first) == read_text_file(second));

    std::vector<Sample> samples = {
        {HourStamp::parse("2024-01-01T00:00:00Z"), 1.0, Qc::valid}};
    std::vector<ObservationSeries> labels;
    labels.emplace_back("A", Variable::icing, samples);
    const fs::path lfirst = dir / "lab1.csv";
    write_labels(lfirst, labels);
    const auto lloaded = load_labels(lfirst, qc);
    const fs::path lsecond = dir / "lab2.csv";
    write_labels(lsecond, lloaded);
    CHECK(read_text_file(lfirst) == read_text_file(lsecond));
  }
}

TEST_CASE("catalog hashes gate the load") {
  const fs::path dir = test_dir("catalog");
  std::vector<Site> sites(1);
  sites[0].site_id = "A";
  sites[0].lat = 50;
  sites[0].lon = -70;
  sites[0].sensor_height_agl_m = 10;
  write_sites(dir / "sites.csv", sites);
  std::vector<Sample> samples = {
      {HourStamp::parse("2024-01-01T00:00:00Z"), 1.0, Qc::valid}};
  std::vector<ObservationSeries> labels;
  labels.emplace_back("A", Variable::icing, samples);
  write_labels(dir / "labels.csv", labels);

  Catalog catalog;
  catalog.root = dir;
  catalog.sites = CatalogEntry{"sites.csv", ""};
  catalog.labels.push_back({"labels.csv", ""});
  write_catalog(dir / "catalog.json", catalog);

  const Catalog loaded = load_catalog(dir / "catalog.json");
  CHECK(loaded.hash_algorithm == "fnv1a64");
  QcSummary qc;
  const DataBundle bundle = load_bundle(loaded, 6, qc);
  CHECK(bundle.sites.size() == 1);
  CHECK(bundle.labels.size() == 1);

  SUBCASE("tampering breaks the hash check") {
    std::ofstream out(dir / "labels.csv", std::ios::app);
    out << "A,2024-01-01T01:00:00Z,0,valid\n";
    out.close();
    CHECK_THROWS_AS(load_catalog(dir / "catalog.json"), SchemaError);
  }

  SUBCASE("unknown site references are rejected") {
    std::vector<ObservationSeries> rogue;
    rogue.emplace_back("GHOST", Variable::icing, samples);
    write_labels(dir / "labels.csv", rogue);
    Catalog again;
    again.root = dir;
    again.sites = CatalogEntry{"sites.csv", ""};
    again.labels.push_back({"labels.csv", ""});
    write_catalog(dir / "catalog.json", again);
    QcSummary qc2;
    CHECK_THROWS_AS(load_bundle(load_catalog(dir / "catalog.json"), 6, qc2),
                    SchemaError);
  }
}

TEST_CASE("decision config parsing") {
  const fs::path dir = test_dir("config");

  SUBCASE("an empty file yields the default parameter table") {
    const fs::path path = write_file(dir, "empty.cfg", "");
    const RunConfig config = load_config(path);
    CHECK(config.params.c_d == 50000.0);
    CHECK(config.params.heli_adder == 75000.0);
    CHECK(config.params.alpha == 0.6);
    CHECK(config.params.loss == 400000.0);
    CHECK(config.params.window_h == 24);
    CHECK(config.params.cadence_h == 6);
    CHECK(config.params.tau_h == 0);
    CHECK(config.params.eta == 0.7);
    CHECK(config.params.p_on_factor == 1.0);
    CHECK(config.params.p_off_factor == 0.6);
    CHECK(config.params.persistence_k == 2);
    CHECK(config.params.crews == 3);
    CHECK(config.params.crew_hours == 12.0);
    CHECK_FALSE(config.params.capacity);
  }

  SUBCASE("alpha outside its domain is a hard error") {
    const fs::path path = write_file(dir, "alpha.cfg", "alpha=1.2\n");
    CHECK_THROWS_AS(load_config(path), DomainError);
  }

  SUBCASE("an override is accepted and echoed") {
    const fs::path path = write_file(dir, "eta.cfg", "eta=0.5\n# comment\n");
    const RunConfig config = load_config(path);
    CHECK(config.params.eta == 0.5);
    bool echoed = false;
    for (const auto& [key, value] : config.echo) {
      if (key == "eta") {
        CHECK(value == "0.5");
        echoed = true;
      }
    }
    CHECK(echoed);
  }

  SUBCASE("unknown keys are rejected") {
    const fs::path path = write_file(dir, "unknown.cfg", "dispatch_cost=5\n");
    CHECK_THROWS_AS(load_config(path), SchemaError);
  }

  SUBCASE("type mismatches name the key") {
    const fs::path path = write_file(dir, "type.cfg", "crews=many\n");
    try {
      load_config(path);
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(std::string(e.what()).find("crews") != std::string::npos);
    }
  }

  SUBCASE("duplicate keys are rejected") {
    const fs::path path = write_file(dir, "dup.cfg", "eta=0.5\neta=0.6\n");
    CHECK_THROWS_AS(load_config(path), SchemaError);
  }

  SUBCASE("config files round trip") {
    DecisionParams params;
    params.eta = 0.55;
    params.capacity = true;
    const fs::path path = dir / "cfg1.cfg";
    write_config(path, params);
    const RunConfig loaded = load_config(path);
    CHECK(loaded.params.eta == 0.55);
    CHECK(loaded.params.capacity);
    const fs::path second = dir / "cfg2.cfg";
    write_config(second, loaded.params);
    CHECK(read_text_file(path) == read_text_file(second));
  }
}

TEST_CASE("float formatting is stable at nine significant digits") {
  CHECK(format_double(0.20833333333333334) == "0.208333333");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(1.0e-6) == "1e-06");
  CHECK(format_double(-2.5) == "-2.5");
  // Idempotent after one write.
  const double reparsed = parse_double_field("0.208333333", "t");
  CHECK(format_double(reparsed) == "0.208333333");
}
