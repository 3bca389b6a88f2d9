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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridwx/makkonen.hpp"
#include "gridwx/timebase.hpp"

namespace gridwx {

/// Cost-loss parameters; defaults are the base de-icing scenario.
struct DecisionParams {
  double c_d = 50'000.0;        // ground dispatch cost, $
  double heli_adder = 75'000.0; // added for helicopter-access sites, $
  double alpha = 0.6;           // mitigation effectiveness
  double loss = 400'000.0;      // avoidable loss, $
  int window_h = 24;            // decision window, h
  int cadence_h = 6;            // issuance cadence, h
  int tau_h = 0;                // mobilization lead time, h
  double eta = 0.7;             // watch level as a fraction of p*
  double p_on_factor = 1.0;     // hysteresis on-threshold, x p*
  double p_off_factor = 0.6;    // hysteresis off-threshold, x p*
  int persistence_k = 2;        // consecutive exceedances before dispatch
  int crews = 3;                // crew capacity H
  double crew_hours = 12.0;     // per-asset crew-hours h_i
  bool capacity = false;        // enforce the crew-hour budget per issuance

  void validate() const;  // hard domain errors
  std::vector<std::string> warnings() const;
};

/// p* = C_d / (alpha L), clamped to [0, 1] (warnings() flags the clamp case).
double optimal_threshold(const DecisionParams& params);
/// Same, for a per-asset dispatch cost (e.g. including the helicopter adder).
double optimal_threshold_for_cost(double dispatch_cost,
                                  const DecisionParams& params);

/// Threshold on the window-mean hourly probability: -ln(1 - p*) / H.
/// p* = 1 is an unreachable threshold and raises DomainError.
double mean_prob_threshold(double p_star, int window_hours);

enum class Action { hold, dispatch };

struct ExpectedCosts {
  double dispatch = 0.0;  // C_d + p (1 - alpha) L
  double hold = 0.0;      // p L
  Action action = Action::hold;  // dispatch on ties
};

ExpectedCosts expected_costs(double p, const DecisionParams& params);

enum class Tier { idle, watch, dispatched };

struct PolicyState {
  Tier tier = Tier::idle;
  int exceed_count = 0;  // in [0, k]
};

enum class Decision { none, watch, dispatch };

std::string_view to_string(Decision d);
std::string_view to_string(Tier t);

/// Two-threshold hysteresis step at one issuance. Watch at q >= eta p*; the
/// exceedance counter rises at q >= p_on, resets below p_off, and holds in
/// between; dispatch fires at k consecutive exceedances and persists until
/// q < p_off.
Decision policy_step(PolicyState& state, double q, double p_star,
                     const DecisionParams& params);

enum class PolicyKind { threshold, hysteresis, climatology, perfect };

std::string_view to_string(PolicyKind p);
PolicyKind policy_from_string(std::string_view text);

enum class Accounting { instance, episode };
enum class ClimatologyMode { pooled, monthly };

struct LedgerEntry {
  HourStamp issue;
  std::string site_id;
  PolicyKind policy = PolicyKind::threshold;
  double prob = 0.0;  // probability the policy acted on
  Decision decision = Decision::none;
  int outcome = 0;
  double cost = 0.0;
  double dispatch_component = 0.0;
  double loss_component = 0.0;
  bool capacity_denied = false;
};

struct EpisodeLedger {
  PolicyKind policy = PolicyKind::threshold;
  std::vector<LedgerEntry> entries;  // ordered by (issue, site_id)
  std::size_t n_dropped = 0;         // instances lost to coverage/forecast gaps

  double total_cost() const;
  double mean_cost() const;  // the E[C] entering REV
};

struct SimulationInput {
  std::span<const ForecastMatrix> forecasts;  // variable = icing, one per site
  std::span<const ObservationSeries> labels;  // binary icing, one per site
  std::span<const Site> sites;                // may be empty (ground cost only)
};

struct SimOptions {
  PolicyKind policy = PolicyKind::threshold;
  Accounting accounting = Accounting::instance;
  ClimatologyMode clim_mode = ClimatologyMode::pooled;
  double coverage_min = 0.75;
  /// Fixed climatology probability override (tests, degenerate baselines).
  std::optional<double> climatology_prob;
  /// Training labels for the climatology table; defaults to the run labels.
  std::span<const ObservationSeries> climatology_labels;
};

/// Instance-wise policy simulation over every (issue, asset): window
/// probability q over [t+tau, t+window), policy decision, realized cost
/// C_d + (1-alpha) L, C_d, L, or 0 (helicopter adder where applicable),
/// greedy capacity allocation when enabled.
EpisodeLedger simulate(const SimulationInput& input,
                       const DecisionParams& params, const SimOptions& options);

struct RevResult {
  std::optional<double> value;  // raw, not clamped to [0, 1]
  double c_fcst = 0.0;
  double c_clim = 0.0;
  double c_perf = 0.0;
};

/// (E[C_clim] - E[C_fcst]) / (E[C_clim] - E[C_perf]); undefined when the
/// climatology and perfect costs coincide.
RevResult rev(const EpisodeLedger& fcst, const EpisodeLedger& clim,
              const EpisodeLedger& perf);
std::optional<double> rev_from_costs(double c_fcst, double c_clim,
                                     double c_perf);

struct SweepRow {
  std::string axis;
  double value = 0.0;
  std::optional<double> p_star;
  std::optional<double> rev;
  std::optional<double> c_fcst, c_clim, c_perf;
  bool is_base = false;
  std::string error;  // per-point failure, propagated not fatal
};

/// One-at-a-time variation of c_d, alpha, or loss; each grid point reruns
/// the simulation with the other parameters held at base.
std::vector<SweepRow> sensitivity_sweep(const SimulationInput& input,
                                        const DecisionParams& base,
                                        std::string_view axis,
                                        std::span<const double> grid,
                                        const SimOptions& options);

// Decision interchange files.
void write_ledger_csv(const std::filesystem::path& path,
                      const EpisodeLedger& ledger);
void write_sweep_csv(const std::filesystem::path& path,
                     std::span<const SweepRow> rows);

}  // namespace gridwx
