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

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gridwx/errors.hpp"
#include "gridwx/version.hpp"

namespace {

using gridwx::cli::kExitUsage;
using gridwx::cli::kExitValidation;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridwx: icing index, label derivation, forecast verification, "
               "and cost-loss dispatch analytics"};
  app.set_version_flag("--version", gridwx::kVersion);
  app.require_subcommand(1);

  std::vector<std::string> raw_args(argv + 1, argv + argc);
  std::function<int()> run;

  gridwx::cli::SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Generate a seeded scenario");
  synth->add_option("--out", synth_args.out, "Output directory")->required();
  synth->add_option("--seed", synth_args.seed, "RNG seed");
  synth->add_option("--sites", synth_args.sites, "Number of sites");
  synth->add_option("--hours", synth_args.hours, "Span in hours");
  synth->add_option("--base-rate", synth_args.base_rate, "Hourly event rate");
  synth->add_option("--persistence", synth_args.persistence,
                    "Mean event run length, h");
  synth->add_option("--lambdas", synth_args.lambdas,
                    "Forecast skill weights, comma list");
  synth->add_option("--jitter", synth_args.jitter, "Logit jitter sd");
  synth->add_option("--cadence", synth_args.cadence, "Issuance cadence, h");
  synth->add_option("--window-hours", synth_args.window, "Decision window, h");
  synth->add_option("--jobs", synth_args.jobs, "Worker threads");
  synth->callback([&] { run = [&] { return cmd_synth(synth_args, raw_args); }; });

  gridwx::cli::IndexArgs index_args;
  CLI::App* index = app.add_subcommand("index", "Physics icing index over profiles");
  index->add_option("--catalog", index_args.catalog, "catalog.json")->required();
  index->add_option("--out", index_args.out, "Output directory")->required();
  index->add_option("--window-hours", index_args.window, "Window, h");
  index->add_option("--cadence", index_args.cadence, "Window start cadence, h");
  index->add_option("--coverage-min", index_args.coverage_min, "Coverage floor");
  double fixed_threshold = 0.0;
  CLI::Option* thr = index->add_option("--score-threshold", fixed_threshold,
                                       "Fixed window score threshold");
  index->add_option("--train-base-rate", index_args.train_base_rate,
                    "Base rate for percentile matching");
  index->add_option("--jobs", index_args.jobs, "Worker threads");
  index->callback([&, thr] {
    if (thr->count() > 0) index_args.score_threshold = fixed_threshold;
    run = [&] { return cmd_index(index_args, raw_args); };
  });

  gridwx::cli::LabelArgs label_args;
  CLI::App* label = app.add_subcommand("label", "Derive binary icing labels");
  label->add_option("--catalog", label_args.catalog, "catalog.json")->required();
  label->add_option("--out", label_args.out, "Output directory")->required();
  label->add_option("--mode", label_args.mode, "sygivre | windfarm")->required();
  label->add_option("--loss-threshold", label_args.loss_threshold,
                    "Production loss fraction for icing");
  label->add_option("--temp-guard", label_args.temp_guard,
                    "Max hub temperature for icing, K");
  label->add_option("--min-potential-frac", label_args.min_potential_frac,
                    "Labelable floor as a fraction of rated power");
  label->add_option("--jobs", label_args.jobs, "Worker threads");
  label->callback([&] { run = [&] { return cmd_label(label_args, raw_args); }; });

  gridwx::cli::VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "Score forecasts");
  verify->add_option("--catalog", verify_args.catalog, "catalog.json")->required();
  verify->add_option("--out", verify_args.out, "Output directory")->required();
  verify->add_option("--lead-hours", verify_args.lead_hours, "Leads, comma list");
  verify->add_option("--window-hours", verify_args.window,
                     "Windowed icing target, h (0 disables)");
  verify->add_option("--cadence", verify_args.cadence, "Forecast cadence, h");
  verify->add_option("--tau", verify_args.tau, "Alert threshold");
  verify->add_option("--utc-offset", verify_args.utc_offset,
                     "Local-time offset for diurnal slices");
  verify->add_option("--slices", verify_args.slices, "Slice presets, comma list");
  verify->add_option("--baseline", verify_args.baseline, "Baseline model id");
  verify->add_option("--coverage-min", verify_args.coverage_min, "Coverage floor");
  verify->add_option("--jobs", verify_args.jobs, "Worker threads");
  verify->callback([&] { run = [&] { return cmd_verify(verify_args, raw_args); }; });

  gridwx::cli::DecideArgs decide_args;
  CLI::App* decide = app.add_subcommand("decide", "Cost-loss policy simulation");
  decide->add_option("--catalog", decide_args.catalog, "catalog.json")->required();
  decide->add_option("--config", decide_args.config, "Decision config file");
  decide->add_option("--out", decide_args.out, "Output directory")->required();
  decide->add_option("--policy", decide_args.policy, "threshold | hysteresis");
  decide->add_option("--model", decide_args.model, "Model id (default: all)");
  decide->add_option("--accounting", decide_args.accounting,
                     "instance | episode");
  decide->add_option("--clim-mode", decide_args.clim_mode, "pooled | monthly");
  decide->add_option("--coverage-min", decide_args.coverage_min, "Coverage floor");
  decide->add_option("--jobs", decide_args.jobs, "Worker threads");
  decide->callback([&] { run = [&] { return cmd_decide(decide_args, raw_args); }; });

  gridwx::cli::SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "REV sensitivity sweep");
  sweep->add_option("--catalog", sweep_args.catalog, "catalog.json")->required();
  sweep->add_option("--config", sweep_args.config, "Decision config file");
  sweep->add_option("--out", sweep_args.out, "Output directory")->required();
  sweep->add_option("--axis", sweep_args.axis, "c_d | alpha | loss")->required();
  sweep->add_option("--grid", sweep_args.grid, "start:stop:step or comma list")
      ->required();
  sweep->add_option("--policy", sweep_args.policy, "threshold | hysteresis");
  sweep->add_option("--model", sweep_args.model, "Model id");
  sweep->add_option("--coverage-min", sweep_args.coverage_min, "Coverage floor");
  sweep->add_option("--jobs", sweep_args.jobs, "Worker threads");
  sweep->callback([&] { run = [&] { return cmd_sweep(sweep_args, raw_args); }; });

  gridwx::cli::SelfcheckArgs selfcheck_args;
  CLI::App* selfcheck =
      app.add_subcommand("selfcheck", "Run the built-in oracle suite");
  selfcheck->add_option("--seed", selfcheck_args.seed, "RNG seed");
  selfcheck->add_option("--out", selfcheck_args.out, "Optional output directory");
  selfcheck->callback(
      [&] { run = [&] { return cmd_selfcheck(selfcheck_args, raw_args); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    return run();
  } catch (const gridwx::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const gridwx::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
