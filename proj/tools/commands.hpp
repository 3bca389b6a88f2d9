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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gridwx::cli {

// Exit-code contract: 0 success, 1 validation error, 2 a run whose metrics
// all came out undefined, 64 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUndefinedOnly = 2;
inline constexpr int kExitUsage = 64;

struct SynthArgs {
  std::filesystem::path out;
  std::uint64_t seed = 1;
  int sites = 14;
  int hours = 24 * 365;
  double base_rate = 0.0368;
  double persistence = 6.0;
  std::string lambdas = "0,0.5,1";
  double jitter = 0.0;
  int cadence = 6;
  int window = 24;
  int jobs = 0;
};

struct IndexArgs {
  std::filesystem::path catalog;
  std::filesystem::path out;
  int window = 24;
  int cadence = 6;
  double coverage_min = 0.75;
  std::optional<double> score_threshold;
  double train_base_rate = 0.087;
  int jobs = 0;
};

struct LabelArgs {
  std::filesystem::path catalog;
  std::filesystem::path out;
  std::string mode;  // sygivre | windfarm
  double loss_threshold = 0.2;
  double temp_guard = 275.15;
  double min_potential_frac = 0.05;
  int jobs = 0;
};

struct VerifyArgs {
  std::filesystem::path catalog;
  std::filesystem::path out;
  std::string lead_hours = "6,12,24";
  int window = 24;
  int cadence = 6;
  double tau = 0.5;
  int utc_offset = -5;
  std::string slices = "all,evening";
  std::string baseline;
  double coverage_min = 0.75;
  int jobs = 0;
};

struct DecideArgs {
  std::filesystem::path catalog;
  std::filesystem::path config;
  std::filesystem::path out;
  std::string policy = "threshold";
  std::string model;  // empty = every model present
  std::string accounting = "instance";
  std::string clim_mode = "pooled";
  double coverage_min = 0.75;
  int jobs = 0;
};

struct SweepArgs {
  std::filesystem::path catalog;
  std::filesystem::path config;
  std::filesystem::path out;
  std::string axis;
  std::string grid;  // start:stop:step or comma list
  std::string policy = "threshold";
  std::string model;
  double coverage_min = 0.75;
  int jobs = 0;
};

struct SelfcheckArgs {
  std::uint64_t seed = 12345;
  std::filesystem::path out;  // optional
};

int cmd_synth(const SynthArgs& args, const std::vector<std::string>& argv);
int cmd_index(const IndexArgs& args, const std::vector<std::string>& argv);
int cmd_label(const LabelArgs& args, const std::vector<std::string>& argv);
int cmd_verify(const VerifyArgs& args, const std::vector<std::string>& argv);
int cmd_decide(const DecideArgs& args, const std::vector<std::string>& argv);
int cmd_sweep(const SweepArgs& args, const std::vector<std::string>& argv);
int cmd_selfcheck(const SelfcheckArgs& args,
                  const std::vector<std::string>& argv);

}  // namespace gridwx::cli
