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

#include "gridwx/decide.hpp"

namespace gridwx::synth {

// Brute-force ground truth written directly from the defining formulas.
// These functions deliberately share no computation with the verify/decide
// implementations they check.

struct BruteInstance {
  double q = 0.0;       // forecast window probability
  double q_clim = 0.0;  // climatology window probability
  int outcome = 0;
};

struct BruteRev {
  double c_fcst = 0.0;
  double c_clim = 0.0;
  double c_perf = 0.0;  // per-instance minimum over both actions
  std::optional<double> rev;
};

/// Direct two-action enumeration per instance under the p* threshold rule;
/// the helicopter adder is out of scope here (single shared dispatch cost).
BruteRev brute_force_rev(std::span<const BruteInstance> instances,
                         const DecisionParams& params);

struct BruteRankMetrics {
  std::optional<double> ap;   // undefined without a positive
  std::optional<double> auc;  // undefined without both classes
};

/// AP by explicit threshold enumeration (O(n^2) recount per threshold), AUC
/// by all-pairs comparison with half credit for ties.
BruteRankMetrics brute_force_rank_metrics(std::span<const double> scores,
                                          std::span<const int> labels);

}  // namespace gridwx::synth
