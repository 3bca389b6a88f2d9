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

#include "commands.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <iostream>
#include <map>
#include <set>

#include <json.hpp>

#include "gridwx/csv.hpp"
#include "gridwx/decide.hpp"
#include "gridwx/errors.hpp"
#include "gridwx/ingest.hpp"
#include "gridwx/labels.hpp"
#include "gridwx/makkonen.hpp"
#include "gridwx/oracles.hpp"
#include "gridwx/parallel.hpp"
#include "gridwx/rng.hpp"
#include "gridwx/synth.hpp"
#include "gridwx/timebase.hpp"
#include "gridwx/verify.hpp"
#include "gridwx/version.hpp"

namespace gridwx::cli {

namespace {

using Clock = std::chrono::steady_clock;

struct ManifestBuilder {
  std::string command;
  std::vector<std::string> argv;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> effective_config;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, hash
  std::vector<std::string> outputs;
  nlohmann::json extra;
  Clock::time_point started = Clock::now();

  void add_input(const std::filesystem::path& path) {
    inputs.emplace_back(path.string(), fnv1a64_hex_file(path));
  }

  /// Identical runs must produce identical manifests, so the recorded argv
  /// drops the worker-count flag and wall time is the single varying field.
  void write(const std::filesystem::path& out_dir) {
    nlohmann::json j;
    j["command"] = command;
    nlohmann::json args = nlohmann::json::array();
    for (std::size_t i = 0; i < argv.size(); ++i) {
      if (argv[i] == "--jobs") {
        ++i;
        continue;
      }
      if (argv[i].rfind("--jobs=", 0) == 0) continue;
      args.push_back(argv[i]);
    }
    j["argv"] = std::move(args);
    j["version"] = kVersion;
    j["rng"] = Rng::algorithm();
    if (seed) j["seed"] = *seed;
    if (!effective_config.empty()) {
      nlohmann::json cfg;
      for (const auto& [k, v] : effective_config) cfg[k] = v;
      j["effective_config"] = std::move(cfg);
    }
    nlohmann::json in = nlohmann::json::array();
    for (const auto& [path, hash] : inputs) {
      in.push_back({{"path", path}, {"hash", hash}});
    }
    j["inputs"] = std::move(in);
    std::sort(outputs.begin(), outputs.end());
    j["outputs"] = outputs;
    if (!extra.empty()) j["run"] = extra;
    j["wall_time_ms"] = std::chrono::duration<double, std::milli>(
                            Clock::now() - started)
                            .count();
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    if (!out) {
      throw SchemaError("cannot write manifest in " + out_dir.string());
    }
    out << j.dump(2) << "\n";
  }
};

void ensure_out_dir(const std::filesystem::path& out) {
  if (out.empty()) throw SchemaError("--out is required");
  std::filesystem::create_directories(out);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) {
      if (start < text.size()) out.push_back(text.substr(start));
      break;
    }
    if (comma > start) out.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  for (const std::string& item : split_list(text)) {
    out.push_back(static_cast<int>(parse_int_field(item, what)));
  }
  if (out.empty()) throw SchemaError(std::string(what) + ": empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const char* what) {
  std::vector<double> out;
  for (const std::string& item : split_list(text)) {
    out.push_back(parse_double_field(item, what));
  }
  if (out.empty()) throw SchemaError(std::string(what) + ": empty list");
  return out;
}

/// Grid syntax: either "start:stop:step" (inclusive) or a comma list.
std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) {
    return parse_double_list(text, "--grid");
  }
  const std::size_t a = text.find(':');
  const std::size_t b = text.find(':', a + 1);
  if (b == std::string::npos) {
    throw SchemaError("--grid: expected start:stop:step");
  }
  const double start = parse_double_field(text.substr(0, a), "--grid start");
  const double stop = parse_double_field(text.substr(a + 1, b - a - 1),
                                         "--grid stop");
  const double step = parse_double_field(text.substr(b + 1), "--grid step");
  if (!(step > 0.0) || stop < start) {
    throw SchemaError("--grid: need start <= stop and step > 0");
  }
  std::vector<double> out;
  const double eps = step * 1e-9;
  for (double v = start; v <= stop + eps; v += step) {
    out.push_back(std::min(v, stop));
  }
  return out;
}

void write_qc_summary(const std::filesystem::path& out_dir,
                      const QcSummary& qc, ManifestBuilder& manifest) {
  std::ofstream out(out_dir / "qc_summary.json", std::ios::binary);
  if (!out) throw SchemaError("cannot write qc_summary.json");
  out << qc.to_json();
  manifest.outputs.push_back("qc_summary.json");
}

std::vector<std::string> model_ids(std::span<const ForecastMatrix> forecasts) {
  std::set<std::string> ids;
  for (const ForecastMatrix& fc : forecasts) ids.insert(fc.model_id());
  return {ids.begin(), ids.end()};
}

}  // namespace

// ---------------------------------------------------------------------------
// synth

namespace {

/// Writes the scenario's interchange files plus catalog.json; returns the
/// file list (catalog last).
std::vector<std::string> write_scenario_files(const std::filesystem::path& out,
                                              const synth::Scenario& scenario) {
  write_sites(out / "sites.csv", scenario.sites);
  write_labels(out / "labels.csv", scenario.labels);
  write_cycle_counts(out / "sygivre.csv", scenario.cycle_counts);
  write_production(out / "production.csv", scenario.production);
  write_power_curve(out / "power_curve.csv", scenario.power_curve);
  write_profiles(out / "profiles.csv", scenario.profiles);
  std::vector<ForecastMatrix> all_forecasts;
  for (const auto& [lambda, family] : scenario.forecasts) {
    for (const ForecastMatrix& fc : family) all_forecasts.push_back(fc);
  }
  write_forecasts(out / "forecasts.csv", all_forecasts);

  Catalog catalog;
  catalog.root = out;
  catalog.sites = CatalogEntry{"sites.csv", ""};
  catalog.labels.push_back({"labels.csv", ""});
  catalog.cycle_counts.push_back({"sygivre.csv", ""});
  catalog.production.push_back({"production.csv", ""});
  catalog.power_curves.push_back({"power_curve.csv", ""});
  catalog.profiles.push_back({"profiles.csv", ""});
  catalog.forecasts.push_back({"forecasts.csv", ""});
  write_catalog(out / "catalog.json", catalog);
  return {"sites.csv",       "labels.csv",   "sygivre.csv",  "production.csv",
          "power_curve.csv", "profiles.csv", "forecasts.csv", "catalog.json"};
}

nlohmann::json spec_to_json(const synth::ScenarioSpec& spec) {
  nlohmann::json j;
  j["sites"] = spec.n_sites;
  j["start"] = spec.start.to_string();
  j["hours"] = spec.span_hours;
  j["base_rate"] = spec.base_rate;
  j["persistence"] = spec.persistence_hours;
  j["lambdas"] = spec.lambdas;
  j["jitter"] = spec.logit_jitter_sd;
  j["cadence"] = spec.cadence_h;
  j["window"] = spec.window_h;
  return j;
}

synth::ScenarioSpec spec_from_json(const nlohmann::json& j,
                                   std::uint64_t seed) {
  synth::ScenarioSpec spec;
  spec.seed = seed;
  spec.n_sites = j.at("sites").get<int>();
  spec.start = HourStamp::parse(j.at("start").get<std::string>());
  spec.span_hours = j.at("hours").get<int>();
  spec.base_rate = j.at("base_rate").get<double>();
  spec.persistence_hours = j.at("persistence").get<double>();
  spec.lambdas = j.at("lambdas").get<std::vector<double>>();
  spec.logit_jitter_sd = j.at("jitter").get<double>();
  spec.cadence_h = j.at("cadence").get<int>();
  spec.window_h = j.at("window").get<int>();
  return spec;
}

}  // namespace

int cmd_synth(const SynthArgs& args, const std::vector<std::string>& argv) {
  ManifestBuilder manifest;
  manifest.command = "synth";
  manifest.argv = argv;
  manifest.seed = args.seed;
  ensure_out_dir(args.out);

  synth::ScenarioSpec spec;
  spec.seed = args.seed;
  spec.n_sites = args.sites;
  spec.span_hours = args.hours;
  spec.base_rate = args.base_rate;
  spec.persistence_hours = args.persistence;
  spec.lambdas = parse_double_list(args.lambdas, "--lambdas");
  spec.logit_jitter_sd = args.jitter;
  spec.cadence_h = args.cadence;
  spec.window_h = args.window;
  const synth::Scenario scenario = synth::gen_scenario(spec);

  manifest.outputs = write_scenario_files(args.out, scenario);
  manifest.extra["pooled_hourly_rate"] = scenario.pooled_hourly_rate;
  manifest.extra["pooled_window_rate"] = scenario.pooled_window_rate;
  manifest.extra["spec"] = spec_to_json(spec);
  manifest.write(args.out);
  std::cout << "synth: " << scenario.sites.size() << " sites, "
            << args.hours << " h, hourly base rate "
            << format_double(scenario.pooled_hourly_rate) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// index

int cmd_index(const IndexArgs& args, const std::vector<std::string>& argv) {
  ManifestBuilder manifest;
  manifest.command = "index";
  manifest.argv = argv;
  ensure_out_dir(args.out);
  manifest.add_input(args.catalog);

  QcSummary qc;
  const Catalog catalog = load_catalog(args.catalog);
  BundleSelect select;
  select.profiles = true;
  const DataBundle bundle = load_bundle(catalog, args.cadence, qc, select);
  if (bundle.profiles.empty()) {
    throw SchemaError("index: catalog has no profiles");
  }
  if (bundle.sites.empty()) {
    throw SchemaError("index: catalog has no sites table");
  }
  std::map<std::string, const Site*> sites;
  for (const Site& s : bundle.sites) sites[s.site_id] = &s;

  IcingProxyParams params;
  params.window = WindowSpec{args.window, args.coverage_min};

  struct SiteWork {
    const std::string* site_id = nullptr;
    const std::vector<SiteProfile>* profiles = nullptr;
    const Site* site = nullptr;
    std::optional<ObservationSeries> rates;
    std::vector<std::pair<HourStamp, double>> window_scores;
  };
  std::vector<SiteWork> work;
  for (const auto& [site_id, profiles] : bundle.profiles) {
    SiteWork w;
    w.site_id = &site_id;
    w.profiles = &profiles;
    w.site = sites.at(site_id);
    work.push_back(w);
  }

  parallel_for(work.size(), args.jobs, [&](std::size_t i) {
    SiteWork& w = work[i];
    w.rates = proxy_rate_series(*w.profiles, *w.site, params);
    const auto samples = w.rates->samples();
    if (samples.empty()) return;
    const std::int64_t last = samples.back().hour.hours();
    std::int64_t issue =
        ceil_to_cadence(samples.front().hour, args.cadence).hours();
    for (; issue + args.window <= last + 1; issue += args.cadence) {
      const auto scored =
          windowed_index(*w.rates, HourStamp(issue), params.window, 0.0);
      if (scored) w.window_scores.emplace_back(HourStamp(issue), scored->score);
    }
  });

  double threshold = 0.0;
  std::string threshold_mode;
  if (args.score_threshold) {
    threshold = *args.score_threshold;
    threshold_mode = "fixed";
  } else {
    std::vector<double> scores;
    for (const SiteWork& w : work) {
      for (const auto& [_, score] : w.window_scores) scores.push_back(score);
    }
    threshold = percentile_matched_threshold(std::move(scores),
                                             args.train_base_rate);
    threshold_mode = "percentile_matched";
  }

  std::vector<ObservationSeries> rate_series;
  for (SiteWork& w : work) rate_series.push_back(std::move(*w.rates));
  write_observations(args.out / "index_hourly.csv", rate_series);

  {
    CsvWriter w(args.out / "index_windows.csv");
    w.row({"site_id", "window_start_utc", "score", "flag"});
    for (const SiteWork& sw : work) {
      for (const auto& [start, score] : sw.window_scores) {
        w.row({*sw.site_id, start.to_string(), format_double(score),
               score > threshold ? "1" : "0"});
      }
    }
  }

  write_qc_summary(args.out, qc, manifest);
  manifest.outputs.push_back("index_hourly.csv");
  manifest.outputs.push_back("index_windows.csv");
  manifest.extra["score_threshold"] = threshold;
  manifest.extra["threshold_mode"] = threshold_mode;
  if (threshold_mode == "percentile_matched") {
    manifest.extra["train_base_rate"] = args.train_base_rate;
  }
  manifest.write(args.out);
  std::cout << "index: " << work.size() << " sites, window threshold "
            << format_double(threshold) << " (" << threshold_mode << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// label

int cmd_label(const LabelArgs& args, const std::vector<std::string>& argv) {
  ManifestBuilder manifest;
  manifest.command = "label";
  manifest.argv = argv;
  ensure_out_dir(args.out);
  manifest.add_input(args.catalog);

  QcSummary qc;
  const Catalog catalog = load_catalog(args.catalog);
  BundleSelect select;
  select.cycle_counts = args.mode == "sygivre";
  select.production = select.power_curves = args.mode == "windfarm";
  const DataBundle bundle = load_bundle(catalog, 6, qc, select);

  if (args.mode == "sygivre") {
    if (bundle.cycle_counts.empty()) {
      throw SchemaError("label: catalog has no cycle-count files");
    }
    std::vector<ObservationSeries> labels;
    nlohmann::json resets;
    long long events = 0;
    long long valid_hours = 0;
    for (const CycleCounterSeries& series : bundle.cycle_counts) {
      SygivreLabels derived = sygivre_to_binary(series);
      resets[series.site_id] = derived.counter_resets;
      for (const Sample& s : derived.binary.samples()) {
        if (s.qc != Qc::valid) continue;
        events += s.value == 1.0 ? 1 : 0;
        ++valid_hours;
      }
      labels.push_back(std::move(derived.binary));
    }
    write_labels(args.out / "labels_sygivre.csv", labels);
    manifest.outputs.push_back("labels_sygivre.csv");
    manifest.extra["counter_resets"] = std::move(resets);
    // Reported next to the file so base-rate drift is visible at a glance.
    if (valid_hours > 0) {
      manifest.extra["labeled_base_rate"] =
          static_cast<double>(events) / static_cast<double>(valid_hours);
    }
  } else if (args.mode == "windfarm") {
    if (bundle.production.empty()) {
      throw SchemaError("label: catalog has no production files");
    }
    if (bundle.power_curves.empty()) {
      throw SchemaError("label: catalog has no power curve");
    }
    const PowerCurve& curve = bundle.power_curves.front();
    ProductionLabelParams params;
    params.loss_threshold = args.loss_threshold;
    params.temp_guard_k = args.temp_guard;
    params.min_potential_kw = args.min_potential_frac * curve.rated_kw();

    std::map<std::string, std::vector<Sample>> by_farm;
    CsvWriter detail(args.out / "labels_windfarm_detail.csv");
    detail.row({"farm_id", "hour_utc", "potential_kw", "loss_fraction",
                "icing", "qc"});
    std::vector<ProductionRecord> records(bundle.production.begin(),
                                          bundle.production.end());
    std::stable_sort(records.begin(), records.end(),
                     [](const ProductionRecord& a, const ProductionRecord& b) {
                       if (a.farm_id != b.farm_id) return a.farm_id < b.farm_id;
                       return a.hour < b.hour;
                     });
    for (const ProductionRecord& rec : records) {
      const ProductionLabel label = icing_from_production(rec, curve, params);
      Sample s;
      s.hour = rec.hour;
      s.value = label.icing.value_or(0);
      s.qc = label.icing ? Qc::valid : Qc::missing;
      by_farm[rec.farm_id].push_back(s);
      detail.row({rec.farm_id, rec.hour.to_string(),
                  format_double(potential_power(curve, rec.hub_wind_ms)),
                  label.loss_fraction ? format_double(*label.loss_fraction) : "",
                  label.icing ? format_int(*label.icing) : "",
                  std::string(to_string(s.qc))});
    }
    std::vector<ObservationSeries> labels;
    for (auto& [farm, samples] : by_farm) {
      labels.emplace_back(farm, Variable::icing, std::move(samples));
    }
    write_labels(args.out / "labels_windfarm.csv", labels);
    manifest.outputs.push_back("labels_windfarm.csv");
    manifest.outputs.push_back("labels_windfarm_detail.csv");
    manifest.extra["loss_threshold"] = args.loss_threshold;
    manifest.extra["temp_guard_k"] = args.temp_guard;
    manifest.extra["min_potential_kw"] = params.min_potential_kw;
  } else {
    throw SchemaError("label: --mode must be sygivre or windfarm");
  }

  write_qc_summary(args.out, qc, manifest);
  manifest.write(args.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

namespace {

struct VerifyState {
  std::vector<ScoreReport> reports;
  std::size_t defined_metrics = 0;
  std::size_t total_metrics = 0;

  void add(ScoreReport report) {
    for (const auto& [name, value] : report.metrics) {
      if (name == "base_rate") continue;  // informational, not a skill score
      ++total_metrics;
      if (value) ++defined_metrics;
    }
    reports.push_back(std::move(report));
  }
};

void add_icing_metrics(ScoreReport& report, std::span<const double> probs,
                       std::span<const int> labels, double tau) {
  const auto pr = pr_curve_and_ap(probs, labels);
  const auto roc = roc_and_auc(probs, labels);
  const ConfusionCounts counts = confusion(probs, labels, tau);
  const double base_rate =
      labels.empty() ? 0.0
                     : static_cast<double>(
                           std::count(labels.begin(), labels.end(), 1)) /
                           static_cast<double>(labels.size());
  report.metrics.emplace_back(
      "ap", pr ? std::optional<double>(pr->ap) : std::nullopt);
  report.metrics.emplace_back(
      "auc", roc ? std::optional<double>(roc->auc) : std::nullopt);
  report.metrics.emplace_back("precision", precision(counts));
  report.metrics.emplace_back("recall", recall(counts));
  report.metrics.emplace_back("f1", f1_score(counts));
  report.metrics.emplace_back("csi", csi(counts));
  report.metrics.emplace_back("base_rate",
                              labels.empty() ? std::nullopt
                                             : std::optional<double>(base_rate));
  report.metrics.emplace_back(
      "lift", pr ? lift(pr->ap, base_rate) : std::nullopt);
}

}  // namespace

int cmd_verify(const VerifyArgs& args, const std::vector<std::string>& argv) {
  ManifestBuilder manifest;
  manifest.command = "verify";
  manifest.argv = argv;
  ensure_out_dir(args.out);
  manifest.add_input(args.catalog);

  QcSummary qc;
  const Catalog catalog = load_catalog(args.catalog);
  BundleSelect select;
  select.forecasts = select.observations = select.labels = true;
  const DataBundle bundle = load_bundle(catalog, args.cadence, qc, select);
  if (bundle.forecasts.empty()) {
    throw SchemaError("verify: catalog has no forecasts");
  }
  const std::vector<int> leads = parse_int_list(args.lead_hours, "--lead-hours");

  std::vector<SliceSpec> slices;
  for (const std::string& name : split_list(args.slices)) {
    slices.push_back(SliceSpec::preset(name, args.utc_offset));
  }
  if (slices.empty()) slices.push_back(SliceSpec::preset("all", args.utc_offset));

  // Observation lookup; icing truth may come from label files or from an
  // icing observation series.
  std::map<std::pair<std::string, Variable>, const ObservationSeries*> obs;
  for (const ObservationSeries& s : bundle.observations) {
    obs[{s.site_id(), s.variable()}] = &s;
  }
  for (const ObservationSeries& s : bundle.labels) {
    obs[{s.site_id(), Variable::icing}] = &s;
  }

  const std::vector<std::string> models = model_ids(bundle.forecasts);
  const WindowSpec window_spec{args.window, args.coverage_min};

  // Per-matrix scoring packets, computed in parallel, merged in order.
  struct Packet {
    const ForecastMatrix* fc = nullptr;
    const ObservationSeries* truth = nullptr;
    std::vector<ScoreReport> reports;
    // per lead: slice-filtered pairs for pooling (continuous variables)
    std::map<std::pair<int, std::string>, std::vector<std::pair<double, double>>>
        pooled_pairs;
    std::map<std::pair<int, std::string>, std::size_t> pooled_dropped;
    // icing: per lead probability/label columns, plus windowed instances
    std::map<int, std::pair<std::vector<double>, std::vector<int>>> hourly;
    std::map<int, std::size_t> hourly_dropped;
    std::vector<WindowedInstance> windowed;
    std::size_t windowed_dropped = 0;
  };
  std::vector<Packet> packets;
  for (const ForecastMatrix& fc : bundle.forecasts) {
    Packet p;
    p.fc = &fc;
    const auto it = obs.find({fc.site_id(), fc.variable()});
    p.truth = it == obs.end() ? nullptr : it->second;
    packets.push_back(p);
  }

  parallel_for(packets.size(), args.jobs, [&](std::size_t i) {
    Packet& p = packets[i];
    const ForecastMatrix& fc = *p.fc;
    if (p.truth == nullptr) return;
    if (fc.variable() == Variable::icing) {
      for (const int lead : leads) {
        const AlignedPairs aligned = align(fc, *p.truth, lead);
        auto& [probs, labels] = p.hourly[lead];
        for (const auto& [prob, label] : aligned.pairs) {
          probs.push_back(prob);
          labels.push_back(static_cast<int>(label));
        }
        p.hourly_dropped[lead] = aligned.n_dropped;
        ScoreReport report;
        report.model_id = fc.model_id();
        report.site_id = fc.site_id();
        report.variable = std::string(to_string(fc.variable()));
        report.lead_h = lead;
        report.n_pairs = aligned.pairs.size();
        report.n_dropped = aligned.n_dropped;
        add_icing_metrics(report, probs, labels, args.tau);
        p.reports.push_back(std::move(report));
      }
      if (args.window > 0) {
        WindowedInstances wi = windowed_instances(fc, *p.truth, window_spec);
        p.windowed = std::move(wi.instances);
        p.windowed_dropped = wi.n_dropped;
        ScoreReport report;
        report.model_id = fc.model_id();
        report.site_id = fc.site_id();
        report.variable = std::string(to_string(fc.variable()));
        report.window_h = args.window;
        report.n_pairs = p.windowed.size();
        report.n_dropped = p.windowed_dropped;
        std::vector<double> probs;
        std::vector<int> outcomes;
        for (const WindowedInstance& inst : p.windowed) {
          probs.push_back(inst.q);
          outcomes.push_back(inst.outcome);
        }
        add_icing_metrics(report, probs, outcomes, args.tau);
        p.reports.push_back(std::move(report));
      }
    } else {
      for (const SliceSpec& slice : slices) {
        std::vector<ScoreReport> rows =
            lead_profile(fc, *p.truth, leads, slice);
        for (ScoreReport& row : rows) p.reports.push_back(std::move(row));
        for (const int lead : leads) {
          const AlignedPairs aligned = align(fc, *p.truth, lead);
          auto& pooled = p.pooled_pairs[{lead, slice.name}];
          for (std::size_t k = 0; k < aligned.pairs.size(); ++k) {
            if (slice.contains(aligned.issues[k] + lead)) {
              pooled.push_back(aligned.pairs[k]);
            }
          }
          p.pooled_dropped[{lead, slice.name}] += aligned.n_dropped;
        }
      }
    }
  });

  VerifyState state;
  for (Packet& p : packets) {
    if (p.truth == nullptr) {
      std::cerr << "verify: no observations for " << p.fc->model_id() << "/"
                << p.fc->site_id() << "/" << to_string(p.fc->variable())
                << ", skipping\n";
      continue;
    }
    for (ScoreReport& r : p.reports) state.add(std::move(r));
  }

  // Pooled rows and station aggregates per model.
  std::filesystem::create_directories(args.out / "curves");
  std::vector<std::string> curve_files;
  for (const std::string& model : models) {
    // Continuous variables: pooled MAE per (variable, lead, slice), station
    // MAE tables for baseline comparisons.
    for (const Variable var : {Variable::t2m, Variable::precip, Variable::wind}) {
      for (const SliceSpec& slice : slices) {
        for (const int lead : leads) {
          std::vector<std::pair<double, double>> pooled;
          std::size_t dropped = 0;
          bool any = false;
          for (const Packet& p : packets) {
            if (p.fc->model_id() != model || p.fc->variable() != var) continue;
            any = true;
            const auto it = p.pooled_pairs.find({lead, slice.name});
            if (it != p.pooled_pairs.end()) {
              pooled.insert(pooled.end(), it->second.begin(), it->second.end());
            }
            const auto dit = p.pooled_dropped.find({lead, slice.name});
            if (dit != p.pooled_dropped.end()) dropped += dit->second;
          }
          if (!any) continue;
          ScoreReport report;
          report.model_id = model;
          report.site_id = "pooled";
          report.variable = std::string(to_string(var));
          report.lead_h = lead;
          report.slice = slice.name;
          report.n_pairs = pooled.size();
          report.n_dropped = dropped;
          report.metrics.emplace_back("mae", mae(pooled));
          state.add(std::move(report));
        }
      }
    }

    // Icing: pooled hourly metrics per lead and pooled windowed metrics,
    // plus PR/ROC curves and the station F1 CDF.
    for (const int lead : leads) {
      std::vector<double> probs;
      std::vector<int> labels;
      std::size_t dropped = 0;
      bool any = false;
      for (const Packet& p : packets) {
        if (p.fc->model_id() != model || p.fc->variable() != Variable::icing) {
          continue;
        }
        const auto it = p.hourly.find(lead);
        if (it == p.hourly.end()) continue;
        any = true;
        probs.insert(probs.end(), it->second.first.begin(),
                     it->second.first.end());
        labels.insert(labels.end(), it->second.second.begin(),
                      it->second.second.end());
        const auto dit = p.hourly_dropped.find(lead);
        if (dit != p.hourly_dropped.end()) dropped += dit->second;
      }
      if (!any) continue;
      ScoreReport report;
      report.model_id = model;
      report.site_id = "pooled";
      report.variable = "icing";
      report.lead_h = lead;
      report.n_pairs = probs.size();
      report.n_dropped = dropped;
      add_icing_metrics(report, probs, labels, args.tau);
      state.add(std::move(report));
    }
    if (args.window > 0) {
      std::vector<double> probs;
      std::vector<int> outcomes;
      std::vector<double> station_f1;
      std::size_t dropped = 0;
      bool any = false;
      for (const Packet& p : packets) {
        if (p.fc->model_id() != model || p.fc->variable() != Variable::icing) {
          continue;
        }
        any = true;
        std::vector<double> site_probs;
        std::vector<int> site_outcomes;
        for (const WindowedInstance& inst : p.windowed) {
          probs.push_back(inst.q);
          outcomes.push_back(inst.outcome);
          site_probs.push_back(inst.q);
          site_outcomes.push_back(inst.outcome);
        }
        dropped += p.windowed_dropped;
        const auto f1 =
            f1_score(confusion(site_probs, site_outcomes, args.tau));
        if (f1) station_f1.push_back(*f1);
      }
      if (any) {
        ScoreReport report;
        report.model_id = model;
        report.site_id = "pooled";
        report.variable = "icing";
        report.window_h = args.window;
        report.n_pairs = probs.size();
        report.n_dropped = dropped;
        add_icing_metrics(report, probs, outcomes, args.tau);
        state.add(std::move(report));

        if (const auto pr = pr_curve_and_ap(probs, outcomes)) {
          const std::string name = "curves/pr_window_" + model + ".csv";
          write_curve_csv(args.out / name, pr->points);
          curve_files.push_back(name);
        }
        if (const auto roc = roc_and_auc(probs, outcomes)) {
          const std::string name = "curves/roc_window_" + model + ".csv";
          write_curve_csv(args.out / name, roc->points);
          curve_files.push_back(name);
        }
        if (!station_f1.empty()) {
          const std::string name = "curves/f1_cdf_" + model + ".csv";
          write_curve_csv(args.out / name, station_f1_cdf(station_f1));
          curve_files.push_back(name);
        }
      }
    }
  }

  // Baseline comparisons: fractional skill on pooled MAE and the fraction of
  // stations beating the baseline, per (variable, lead).
  if (!args.baseline.empty()) {
    const auto station_mae = [&](const std::string& model, Variable var,
                                 int lead)
        -> std::map<std::string, double> {
      std::map<std::string, double> out;
      for (const Packet& p : packets) {
        if (p.fc->model_id() != model || p.fc->variable() != var) continue;
        const auto it = p.pooled_pairs.find({lead, std::string("all")});
        if (it == p.pooled_pairs.end()) continue;
        if (const auto value = mae(it->second)) out[p.fc->site_id()] = *value;
      }
      return out;
    };
    for (const std::string& model : models) {
      if (model == args.baseline) continue;
      for (const Variable var :
           {Variable::t2m, Variable::precip, Variable::wind}) {
        for (const int lead : leads) {
          const auto ours = station_mae(model, var, lead);
          const auto base = station_mae(args.baseline, var, lead);
          std::vector<double> model_errs;
          std::vector<double> base_errs;
          for (const auto& [site, err] : ours) {
            const auto it = base.find(site);
            if (it == base.end()) continue;
            model_errs.push_back(err);
            base_errs.push_back(it->second);
          }
          if (model_errs.empty()) continue;
          double model_sum = 0.0;
          double base_sum = 0.0;
          for (std::size_t k = 0; k < model_errs.size(); ++k) {
            model_sum += model_errs[k];
            base_sum += base_errs[k];
          }
          ScoreReport report;
          report.model_id = model;
          report.site_id = "pooled";
          report.variable = std::string(to_string(var));
          report.lead_h = lead;
          report.n_pairs = model_errs.size();
          report.metrics.emplace_back(
              "fractional_skill",
              fractional_skill(model_sum / model_errs.size(),
                               base_sum / base_errs.size()));
          report.metrics.emplace_back(
              "frac_stations_beating_baseline",
              fraction_beating_baseline(model_errs, base_errs));
          state.add(std::move(report));
        }
      }
    }
  }

  write_report_csv(args.out / "report.csv", state.reports);
  write_report_json(args.out / "report.json", state.reports);
  write_qc_summary(args.out, qc, manifest);
  manifest.outputs.push_back("report.csv");
  manifest.outputs.push_back("report.json");
  for (const std::string& f : curve_files) manifest.outputs.push_back(f);
  manifest.extra["models"] = models;
  manifest.write(args.out);

  std::cout << "verify: " << state.reports.size() << " report rows, "
            << state.defined_metrics << "/" << state.total_metrics
            << " metrics defined\n";
  if (state.total_metrics > 0 && state.defined_metrics == 0) {
    std::cerr << "verify: every metric is undefined\n";
    return kExitUndefinedOnly;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// decide

namespace {

struct ModelRun {
  std::string model;
  RevResult result;
  double p_star = 0.0;
  std::size_t n_instances = 0;
  std::size_t n_dropped = 0;
};

SimOptions options_for(const DecideArgs& args, PolicyKind policy) {
  SimOptions options;
  options.policy = policy;
  options.accounting = args.accounting == "episode" ? Accounting::episode
                                                    : Accounting::instance;
  options.clim_mode = args.clim_mode == "monthly" ? ClimatologyMode::monthly
                                                  : ClimatologyMode::pooled;
  options.coverage_min = args.coverage_min;
  return options;
}

}  // namespace

int cmd_decide(const DecideArgs& args, const std::vector<std::string>& argv) {
  ManifestBuilder manifest;
  manifest.command = "decide";
  manifest.argv = argv;
  ensure_out_dir(args.out);
  manifest.add_input(args.catalog);

  RunConfig config = config_from_defaults();
  if (!args.config.empty()) {
    manifest.add_input(args.config);
    config = load_config(args.config);
  }
  manifest.effective_config = config.echo;
  for (const std::string& warning : config.params.warnings()) {
    std::cerr << "decide: warning: " << warning << "\n";
  }
  if (args.accounting != "instance" && args.accounting != "episode") {
    throw SchemaError("decide: --accounting must be instance or episode");
  }
  if (args.clim_mode != "pooled" && args.clim_mode != "monthly") {
    throw SchemaError("decide: --clim-mode must be pooled or monthly");
  }
  const PolicyKind policy = policy_from_string(args.policy);
  if (policy != PolicyKind::threshold && policy != PolicyKind::hysteresis) {
    throw SchemaError("decide: --policy must be threshold or hysteresis");
  }

  QcSummary qc;
  const Catalog catalog = load_catalog(args.catalog);
  BundleSelect select;
  select.forecasts = select.labels = true;
  const DataBundle bundle =
      load_bundle(catalog, config.params.cadence_h, qc, select);
  if (bundle.labels.empty()) throw SchemaError("decide: catalog has no labels");

  std::vector<const ForecastMatrix*> icing;
  for (const ForecastMatrix& fc : bundle.forecasts) {
    if (fc.variable() == Variable::icing) icing.push_back(&fc);
  }
  if (icing.empty()) throw SchemaError("decide: no icing forecasts in catalog");

  std::vector<std::string> models;
  {
    std::set<std::string> ids;
    for (const ForecastMatrix* fc : icing) ids.insert(fc->model_id());
    if (!args.model.empty()) {
      if (ids.count(args.model) == 0) {
        throw SchemaError("decide: model '" + args.model + "' not in catalog");
      }
      models = {args.model};
    } else {
      models.assign(ids.begin(), ids.end());
    }
  }

  std::vector<ModelRun> runs(models.size());
  std::vector<std::array<EpisodeLedger, 3>> ledgers(models.size());
  parallel_for(models.size(), args.jobs, [&](std::size_t m) {
    std::vector<ForecastMatrix> mine;
    for (const ForecastMatrix* fc : icing) {
      if (fc->model_id() == models[m]) mine.push_back(*fc);
    }
    std::sort(mine.begin(), mine.end(),
              [](const ForecastMatrix& a, const ForecastMatrix& b) {
                return a.site_id() < b.site_id();
              });
    for (std::size_t k = 1; k < mine.size(); ++k) {
      if (mine[k].site_id() == mine[k - 1].site_id()) {
        throw SchemaError("decide: model " + models[m] + " has site " +
                          mine[k].site_id() +
                          " split across catalog files; consolidate the "
                          "forecast files first");
      }
    }
    const SimulationInput input{mine, bundle.labels, bundle.sites};
    ledgers[m][0] = simulate(input, config.params, options_for(args, policy));
    ledgers[m][1] = simulate(input, config.params,
                             options_for(args, PolicyKind::climatology));
    ledgers[m][2] = simulate(input, config.params,
                             options_for(args, PolicyKind::perfect));
    ModelRun& run = runs[m];
    run.model = models[m];
    run.result = rev(ledgers[m][0], ledgers[m][1], ledgers[m][2]);
    run.p_star = optimal_threshold(config.params);
    run.n_instances = ledgers[m][0].entries.size();
    run.n_dropped = ledgers[m][0].n_dropped;
  });

  std::size_t defined = 0;
  {
    CsvWriter w(args.out / "rev.csv");
    w.row({"model_id", "policy", "p_star", "c_fcst", "c_clim", "c_perf", "rev",
           "n_instances", "n_dropped"});
    for (std::size_t m = 0; m < models.size(); ++m) {
      const ModelRun& run = runs[m];
      w.row({run.model, args.policy, format_double(run.p_star),
             format_double(run.result.c_fcst), format_double(run.result.c_clim),
             format_double(run.result.c_perf),
             run.result.value ? format_double(*run.result.value) : "",
             format_int(static_cast<long long>(run.n_instances)),
             format_int(static_cast<long long>(run.n_dropped))});
      if (run.result.value) {
        ++defined;
        if (*run.result.value < 0.0 || *run.result.value > 1.0) {
          std::cerr << "decide: REV for " << run.model << " is "
                    << format_double(*run.result.value)
                    << ", outside [0, 1] (policy worse than a bound)\n";
        }
      }
      const std::array<const char*, 3> names = {args.policy.c_str(),
                                                "climatology", "perfect"};
      for (int k = 0; k < 3; ++k) {
        const std::string file =
            "ledger_" + run.model + "_" + names[static_cast<std::size_t>(k)] +
            ".csv";
        write_ledger_csv(args.out / file,
                         ledgers[m][static_cast<std::size_t>(k)]);
        manifest.outputs.push_back(file);
      }
    }
  }

  write_qc_summary(args.out, qc, manifest);
  manifest.outputs.push_back("rev.csv");
  manifest.write(args.out);

  for (const ModelRun& run : runs) {
    std::cout << "decide: " << run.model << " policy " << args.policy
              << " p*=" << format_double(run.p_star) << " REV="
              << (run.result.value ? format_double(*run.result.value)
                                   : std::string("undefined"))
              << "\n";
  }
  if (defined == 0) {
    std::cerr << "decide: REV undefined for every model\n";
    return kExitUndefinedOnly;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const SweepArgs& args, const std::vector<std::string>& argv) {
  ManifestBuilder manifest;
  manifest.command = "sweep";
  manifest.argv = argv;
  ensure_out_dir(args.out);
  manifest.add_input(args.catalog);

  RunConfig config = config_from_defaults();
  if (!args.config.empty()) {
    manifest.add_input(args.config);
    config = load_config(args.config);
  }
  manifest.effective_config = config.echo;

  const std::vector<double> grid = parse_grid(args.grid);
  QcSummary qc;
  const Catalog catalog = load_catalog(args.catalog);
  BundleSelect select;
  select.forecasts = select.labels = true;
  const DataBundle bundle =
      load_bundle(catalog, config.params.cadence_h, qc, select);
  if (bundle.labels.empty()) throw SchemaError("sweep: catalog has no labels");

  std::vector<ForecastMatrix> mine;
  {
    std::set<std::string> ids;
    for (const ForecastMatrix& fc : bundle.forecasts) {
      if (fc.variable() == Variable::icing) ids.insert(fc.model_id());
    }
    if (ids.empty()) throw SchemaError("sweep: no icing forecasts in catalog");
    std::string model = args.model;
    if (model.empty()) {
      if (ids.size() != 1) {
        throw SchemaError("sweep: several models present, pass --model");
      }
      model = *ids.begin();
    } else if (ids.count(model) == 0) {
      throw SchemaError("sweep: model '" + model + "' not in catalog");
    }
    for (const ForecastMatrix& fc : bundle.forecasts) {
      if (fc.variable() == Variable::icing && fc.model_id() == model) {
        mine.push_back(fc);
      }
    }
    std::sort(mine.begin(), mine.end(),
              [](const ForecastMatrix& a, const ForecastMatrix& b) {
                return a.site_id() < b.site_id();
              });
    for (std::size_t k = 1; k < mine.size(); ++k) {
      if (mine[k].site_id() == mine[k - 1].site_id()) {
        throw SchemaError("sweep: model " + model + " has site " +
                          mine[k].site_id() +
                          " split across catalog files; consolidate the "
                          "forecast files first");
      }
    }
    manifest.extra["model"] = model;
  }

  SimOptions options;
  options.policy = policy_from_string(args.policy);
  options.coverage_min = args.coverage_min;
  const SimulationInput input{mine, bundle.labels, bundle.sites};
  const std::vector<SweepRow> rows =
      sensitivity_sweep(input, config.params, args.axis, grid, options);
  write_sweep_csv(args.out / "sweep.csv", rows);

  double base_value = 0.0;
  if (args.axis == "c_d") base_value = config.params.c_d;
  else if (args.axis == "alpha") base_value = config.params.alpha;
  else if (args.axis == "loss") base_value = config.params.loss;
  manifest.extra["axis"] = args.axis;
  manifest.extra["base_value"] = base_value;
  write_qc_summary(args.out, qc, manifest);
  manifest.outputs.push_back("sweep.csv");
  manifest.write(args.out);
  std::cout << "sweep: " << rows.size() << " grid points over " << args.axis
            << "\n";
  for (const SweepRow& row : rows) {
    if (!row.error.empty()) {
      std::cerr << "sweep: " << row.axis << "=" << format_double(row.value)
                << ": " << row.error << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// selfcheck

namespace {

struct CheckRunner {
  bool all_ok = true;
  std::vector<std::string> lines;

  void report(const std::string& name, bool ok, const std::string& detail = "") {
    std::string line = std::string(ok ? "[ ok ] " : "[FAIL] ") + name;
    if (!ok && !detail.empty()) line += ": " + detail;
    lines.push_back(line);
    std::cout << line << "\n";
    if (!ok) all_ok = false;
  }
};

}  // namespace

int cmd_selfcheck(const SelfcheckArgs& args,
                  const std::vector<std::string>& argv) {
  CheckRunner checks;
  Rng rng(args.seed);

  // Rank metrics against the brute-force oracle, small random instances with
  // deliberate ties.
  {
    bool ok = true;
    std::string detail;
    for (int trial = 0; trial < 500 && ok; ++trial) {
      const int n = 1 + static_cast<int>(rng.below(12));
      std::vector<double> scores;
      std::vector<int> labels;
      for (int i = 0; i < n; ++i) {
        const double raw = rng.uniform01();
        scores.push_back(trial % 3 == 0 ? std::round(raw * 4.0) / 4.0 : raw);
        labels.push_back(static_cast<int>(rng.below(2)));
      }
      const auto oracle = synth::brute_force_rank_metrics(scores, labels);
      const auto pr = pr_curve_and_ap(scores, labels);
      const auto roc = roc_and_auc(scores, labels);
      if (pr.has_value() != oracle.ap.has_value() ||
          roc.has_value() != oracle.auc.has_value()) {
        ok = false;
        detail = "definedness mismatch";
        break;
      }
      if (pr && pr->ap != *oracle.ap) {
        ok = false;
        detail = "ap mismatch";
      }
      if (roc && roc->auc != *oracle.auc) {
        ok = false;
        detail = "auc mismatch";
      }
    }
    checks.report("rank metrics match brute force exactly", ok, detail);
  }

  // REV through the full simulation path against direct enumeration, using
  // one-hour windows so instance probabilities pass through unchanged.
  {
    bool ok = true;
    std::string detail;
    for (int trial = 0; trial < 200 && ok; ++trial) {
      const int n = 8 + static_cast<int>(rng.below(40));
      DecisionParams params;
      params.window_h = 1;
      params.cadence_h = 1;
      params.persistence_k = 1;
      const double clim_prob = rng.uniform01();
      std::vector<synth::BruteInstance> instances;
      std::vector<ForecastCell> cells;
      std::vector<Sample> samples;
      for (int i = 0; i < n; ++i) {
        synth::BruteInstance inst;
        inst.q = rng.uniform01();
        inst.q_clim = clim_prob;
        inst.outcome = static_cast<int>(rng.below(2));
        instances.push_back(inst);
        cells.push_back({HourStamp(i), HourStamp(i), inst.q});
        samples.push_back({HourStamp(i), static_cast<double>(inst.outcome),
                           Qc::valid});
      }
      const ForecastMatrix fc("m", "site", Variable::icing, 1, cells);
      const ObservationSeries labels("site", Variable::icing, samples);
      const SimulationInput input{{&fc, 1}, {&labels, 1}, {}};
      SimOptions options;
      options.climatology_prob = clim_prob;
      const EpisodeLedger fcst = simulate(input, params, options);
      options.policy = PolicyKind::climatology;
      const EpisodeLedger clim = simulate(input, params, options);
      options.policy = PolicyKind::perfect;
      const EpisodeLedger perf = simulate(input, params, options);
      const RevResult ours = rev(fcst, clim, perf);
      const synth::BruteRev oracle = synth::brute_force_rev(instances, params);
      const auto close_to = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
      };
      if (!close_to(ours.c_fcst, oracle.c_fcst) ||
          !close_to(ours.c_clim, oracle.c_clim) ||
          !close_to(ours.c_perf, oracle.c_perf)) {
        ok = false;
        detail = "cost mismatch";
      }
      if (ours.value.has_value() != oracle.rev.has_value() ||
          (ours.value && !close_to(*ours.value, *oracle.rev))) {
        ok = false;
        detail = "rev mismatch";
      }
    }
    checks.report("simulated REV matches brute-force enumeration", ok, detail);
  }

  // Window probability against a long-double product, and the threshold
  // mapping round trip.
  {
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
      const int len = 1 + static_cast<int>(rng.below(48));
      std::vector<double> p;
      long double survival = 1.0L;
      for (int i = 0; i < len; ++i) {
        p.push_back(rng.uniform01());
        survival *= 1.0L - static_cast<long double>(p.back());
      }
      const double oracle = static_cast<double>(1.0L - survival);
      if (std::abs(window_prob(p) - oracle) > 1e-12) ok = false;
    }
    checks.report("window probability matches product oracle", ok);
  }
  {
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
      const int horizon = 1 + static_cast<int>(rng.below(48));
      // The mean-probability threshold is reachable only for
      // p <= 1 - exp(-H); stay inside the joint domain.
      const double p =
          rng.uniform01() * (1.0 - std::exp(-static_cast<double>(horizon)));
      const double round_trip =
          window_prob_poisson(mean_prob_threshold(p, horizon), horizon);
      if (std::abs(round_trip - p) > 1e-12) ok = false;
    }
    checks.report("threshold mapping round trip", ok);
  }

  // Base-scenario numbers.
  {
    const DecisionParams params;
    const double p_star = optimal_threshold(params);
    const bool ok_p = std::abs(p_star - 0.2083333333) < 5e-4;
    checks.report("base scenario optimal threshold", ok_p);
    const auto value = rev_from_costs(51913.0, 69064.0, 39055.0);
    checks.report("base scenario REV",
                  value && std::abs(*value - 0.5715) < 5e-4);
  }

  // Golden fixtures, when a fixture directory is configured: regenerate the
  // scenario from the recorded spec and compare content hashes.
  if (const char* fixtures_env = std::getenv("GRIDWX_FIXTURES")) {
    bool ok = true;
    std::string detail;
    try {
      const std::filesystem::path fixtures(fixtures_env);
      const Catalog catalog = load_catalog(fixtures / "catalog.json");
      const nlohmann::json manifest =
          nlohmann::json::parse(read_text_file(fixtures / "manifest.json"));
      const synth::ScenarioSpec spec =
          spec_from_json(manifest.at("run").at("spec"),
                         manifest.at("seed").get<std::uint64_t>());
      const synth::Scenario scenario = synth::gen_scenario(spec);
      const std::filesystem::path temp =
          std::filesystem::temp_directory_path() / "gridwx_fixture_check";
      std::filesystem::remove_all(temp);
      std::filesystem::create_directories(temp);
      write_scenario_files(temp, scenario);
      const auto check_entry = [&](const CatalogEntry& entry) {
        if (!ok) return;
        if (fnv1a64_hex_file(temp / entry.path) != entry.hash) {
          ok = false;
          detail = "fixture drift in " + entry.path;
        }
      };
      if (catalog.sites) check_entry(*catalog.sites);
      for (const auto* list :
           {&catalog.observations, &catalog.forecasts, &catalog.profiles,
            &catalog.labels, &catalog.cycle_counts, &catalog.production,
            &catalog.power_curves}) {
        for (const CatalogEntry& entry : *list) check_entry(entry);
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    checks.report("golden fixtures regenerate byte-identically", ok, detail);
  }

  if (!args.out.empty()) {
    ensure_out_dir(args.out);
    std::ofstream out(args.out / "selfcheck.txt", std::ios::binary);
    for (const std::string& line : checks.lines) out << line << "\n";
    ManifestBuilder manifest;
    manifest.command = "selfcheck";
    manifest.argv = argv;
    manifest.seed = args.seed;
    manifest.outputs.push_back("selfcheck.txt");
    manifest.write(args.out);
  }
  return checks.all_ok ? kExitOk : kExitValidation;
}

}  // namespace gridwx::cli
