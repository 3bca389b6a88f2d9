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

#include "gridwx/oracles.hpp"

#include <algorithm>
#include <vector>

#include "gridwx/errors.hpp"

namespace gridwx::synth {

BruteRev brute_force_rev(std::span<const BruteInstance> instances,
                         const DecisionParams& params) {
  if (instances.size() > 100000) {
    throw DomainError("brute_force_rev: instance set too large");
  }
  const double p_star = params.c_d / (params.alpha * params.loss);
  double total_fcst = 0.0;
  double total_clim = 0.0;
  double total_perf = 0.0;
  for (const BruteInstance& inst : instances) {
    const double cost_dispatch =
        params.c_d + inst.outcome * (1.0 - params.alpha) * params.loss;
    const double cost_hold = inst.outcome * params.loss;
    total_fcst += inst.q >= p_star ? cost_dispatch : cost_hold;
    total_clim += inst.q_clim >= p_star ? cost_dispatch : cost_hold;
    total_perf += std::min(cost_dispatch, cost_hold);
  }
  BruteRev out;
  const double n = static_cast<double>(instances.size());
  if (n > 0) {
    out.c_fcst = total_fcst / n;
    out.c_clim = total_clim / n;
    out.c_perf = total_perf / n;
  }
  if (out.c_clim != out.c_perf) {
    out.rev = (out.c_clim - out.c_fcst) / (out.c_clim - out.c_perf);
  }
  return out;
}

BruteRankMetrics brute_force_rank_metrics(std::span<const double> scores,
                                          std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw DomainError("brute_force_rank_metrics: length mismatch");
  }
  const long long n = static_cast<long long>(scores.size());
  long long positives = 0;
  for (const int y : labels) positives += y;
  const long long negatives = n - positives;

  BruteRankMetrics out;

  if (positives > 0) {
    // Every distinct score is a threshold; recount the confusion table from
    // scratch at each one, descending.
    std::vector<double> thresholds(scores.begin(), scores.end());
    std::sort(thresholds.begin(), thresholds.end(),
              [](double a, double b) { return a > b; });
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                     thresholds.end());
    double ap = 0.0;
    double prev_recall = 0.0;
    for (const double tau : thresholds) {
      long long tp = 0;
      long long alerts = 0;
      for (long long i = 0; i < n; ++i) {
        if (scores[i] >= tau) {
          ++alerts;
          tp += labels[i];
        }
      }
      const double rec =
          static_cast<double>(tp) / static_cast<double>(positives);
      const double prec = static_cast<double>(tp) / static_cast<double>(alerts);
      ap += (rec - prev_recall) * prec;
      prev_recall = rec;
    }
    out.ap = ap;
  }

  if (positives > 0 && negatives > 0) {
    long long twice_wins = 0;  // 2 per strict win, 1 per tie
    for (long long i = 0; i < n; ++i) {
      if (labels[i] != 1) continue;
      for (long long j = 0; j < n; ++j) {
        if (labels[j] != 0) continue;
        if (scores[i] > scores[j]) twice_wins += 2;
        else if (scores[i] == scores[j]) twice_wins += 1;
      }
    }
    out.auc = static_cast<double>(twice_wins) /
              (2.0 * static_cast<double>(positives) *
               static_cast<double>(negatives));
  }
  return out;
}

}  // namespace gridwx::synth
