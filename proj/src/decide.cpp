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

#include "gridwx/decide.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "gridwx/csv.hpp"
#include "gridwx/errors.hpp"

namespace gridwx {

void DecisionParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("alpha must lie in (0, 1]");
  }
  if (c_d < 0.0) throw DomainError("c_d must be >= 0");
  if (heli_adder < 0.0) throw DomainError("heli_adder must be >= 0");
  if (!(loss > 0.0)) throw DomainError("loss must be > 0");
  if (window_h < 1) throw DomainError("window must be >= 1 h");
  if (cadence_h < 1) throw DomainError("cadence must be >= 1 h");
  if (tau_h < 0 || tau_h >= window_h) {
    throw DomainError("tau must lie in [0, window)");
  }
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0, 1)");
  if (!(p_on_factor > 0.0)) throw DomainError("p_on_factor must be > 0");
  if (!(p_off_factor > 0.0 && p_off_factor < p_on_factor)) {
    throw DomainError("need 0 < p_off_factor < p_on_factor");
  }
  if (persistence_k < 1) throw DomainError("persistence must be >= 1");
  if (crews < 0) throw DomainError("crews must be >= 0");
  if (!(crew_hours > 0.0)) throw DomainError("crew_hours must be > 0");
}

std::vector<std::string> DecisionParams::warnings() const {
  std::vector<std::string> out;
  if (c_d >= alpha * loss) {
    out.push_back("c_d >= alpha*loss: dispatch is never optimal, p* clamps to 1");
  }
  return out;
}

double optimal_threshold_for_cost(double dispatch_cost,
                                  const DecisionParams& params) {
  const double avoidable = params.alpha * params.loss;
  if (!(avoidable > 0.0)) {
    throw DomainError("optimal_threshold: alpha*loss must be > 0");
  }
  return std::clamp(dispatch_cost / avoidable, 0.0, 1.0);
}

double optimal_threshold(const DecisionParams& params) {
  return optimal_threshold_for_cost(params.c_d, params);
}

double mean_prob_threshold(double p_star, int window_hours) {
  if (window_hours < 1) throw DomainError("mean_prob_threshold: H must be >= 1");
  if (!(p_star >= 0.0 && p_star < 1.0)) {
    throw DomainError("mean_prob_threshold: unreachable threshold (p* not in [0, 1))");
  }
  return -std::log1p(-p_star) / static_cast<double>(window_hours);
}

ExpectedCosts expected_costs(double p, const DecisionParams& params) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("expected_costs: probability outside [0, 1]");
  }
  ExpectedCosts out;
  out.dispatch = params.c_d + p * (1.0 - params.alpha) * params.loss;
  out.hold = p * params.loss;
  out.action = out.dispatch <= out.hold ? Action::dispatch : Action::hold;
  return out;
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::none: return "hold";
    case Decision::watch: return "watch";
    case Decision::dispatch: return "dispatch";
  }
  return "hold";
}

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::idle: return "idle";
    case Tier::watch: return "watch";
    case Tier::dispatched: return "dispatched";
  }
  return "idle";
}

std::string_view to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::threshold: return "threshold";
    case PolicyKind::hysteresis: return "hysteresis";
    case PolicyKind::climatology: return "climatology";
    case PolicyKind::perfect: return "perfect";
  }
  return "threshold";
}

PolicyKind policy_from_string(std::string_view text) {
  if (text == "threshold") return PolicyKind::threshold;
  if (text == "hysteresis") return PolicyKind::hysteresis;
  if (text == "climatology") return PolicyKind::climatology;
  if (text == "perfect") return PolicyKind::perfect;
  throw SchemaError("unknown policy '" + std::string(text) + "'");
}

Decision policy_step(PolicyState& state, double q, double p_star,
                     const DecisionParams& params) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("policy_step: probability outside [0, 1]");
  }
  const double p_on = params.p_on_factor * p_star;
  const double p_off = params.p_off_factor * p_star;
  const double watch_level = params.eta * p_star;

  if (state.tier == Tier::dispatched) {
    if (q >= p_off) return Decision::dispatch;  // tier persists
    state.tier = Tier::idle;
    state.exceed_count = 0;
    return Decision::none;
  }

  if (q >= p_on) {
    state.exceed_count = std::min(state.exceed_count + 1, params.persistence_k);
  } else if (q < p_off) {
    state.exceed_count = 0;
  }
  // q in [p_off, p_on): the counter holds.

  if (state.exceed_count >= params.persistence_k) {
    state.tier = Tier::dispatched;
    return Decision::dispatch;
  }
  if (q >= watch_level) {
    state.tier = Tier::watch;
    return Decision::watch;
  }
  state.tier = Tier::idle;
  return Decision::none;
}

double EpisodeLedger::total_cost() const {
  double sum = 0.0;
  for (const LedgerEntry& e : entries) sum += e.cost;
  return sum;
}

double EpisodeLedger::mean_cost() const {
  if (entries.empty()) return 0.0;
  return total_cost() / static_cast<double>(entries.size());
}

namespace {

struct SiteInstances {
  std::string site_id;
  double dispatch_cost = 0.0;  // c_d (+ heli adder)
  double p_star = 0.0;
  std::vector<WindowedInstance> instances;
};

struct ClimTable {
  double pooled = 0.0;
  // (site, month of issue) -> windowed event frequency
  std::map<std::pair<std::string, int>, double> monthly;
};

/// Windowed event frequency over the cadence grid of the label span; the
/// grid construction matches the forecast issue grid when labels and
/// forecasts cover the same span.
ClimTable climatology_table(std::span<const ObservationSeries> labels,
                            const DecisionParams& params, double coverage_min) {
  ClimTable table;
  WindowSpec spec{params.window_h - params.tau_h, coverage_min};
  long long pooled_events = 0;
  long long pooled_windows = 0;
  std::map<std::pair<std::string, int>, std::pair<long long, long long>> bins;
  for (const ObservationSeries& series : labels) {
    if (series.empty()) continue;
    const std::int64_t last = series.samples().back().hour.hours();
    std::int64_t issue =
        ceil_to_cadence(series.samples().front().hour, params.cadence_h)
            .hours();
    for (; issue + params.window_h <= last + 1; issue += params.cadence_h) {
      const HourStamp t(issue);
      const std::optional<int> y =
          window_any(series, t + params.tau_h, spec);
      if (!y) continue;
      pooled_events += *y;
      ++pooled_windows;
      auto& bin = bins[{series.site_id(), t.month()}];
      bin.first += *y;
      ++bin.second;
    }
  }
  table.pooled = pooled_windows == 0
                     ? 0.0
                     : static_cast<double>(pooled_events) /
                           static_cast<double>(pooled_windows);
  for (const auto& [key, bin] : bins) {
    table.monthly[key] =
        static_cast<double>(bin.first) / static_cast<double>(bin.second);
  }
  return table;
}

double climatology_prob(const ClimTable& table, ClimatologyMode mode,
                        const std::string& site_id, HourStamp issue) {
  if (mode == ClimatologyMode::monthly) {
    const auto it = table.monthly.find({site_id, issue.month()});
    if (it != table.monthly.end()) return it->second;
  }
  return table.pooled;
}

struct Candidate {
  std::size_t site_index = 0;
  std::size_t instance_index = 0;
  double prob = 0.0;
  Decision decision = Decision::none;
  bool capacity_denied = false;
};

}  // namespace

EpisodeLedger simulate(const SimulationInput& input,
                       const DecisionParams& params, const SimOptions& options) {
  params.validate();

  std::unordered_map<std::string, const Site*> site_by_id;
  for (const Site& s : input.sites) site_by_id[s.site_id] = &s;
  std::unordered_map<std::string, const ObservationSeries*> labels_by_id;
  for (const ObservationSeries& l : input.labels) {
    labels_by_id[l.site_id()] = &l;
  }

  EpisodeLedger ledger;
  ledger.policy = options.policy;

  // Per-site window probabilities and outcomes.
  WindowSpec spec{params.window_h, options.coverage_min};
  std::vector<SiteInstances> sites;
  for (const ForecastMatrix& fc : input.forecasts) {
    if (fc.variable() != Variable::icing) {
      throw SchemaError("simulate: forecast variable must be icing, got " +
                        std::string(to_string(fc.variable())));
    }
    if (fc.cadence_h() != params.cadence_h) {
      throw SchemaError("simulate: forecast cadence " +
                        std::to_string(fc.cadence_h()) +
                        " h does not match configured cadence " +
                        std::to_string(params.cadence_h) + " h");
    }
    const auto labels_it = labels_by_id.find(fc.site_id());
    if (labels_it == labels_by_id.end()) {
      throw SchemaError("simulate: no labels for site " + fc.site_id());
    }
    SiteInstances si;
    si.site_id = fc.site_id();
    si.dispatch_cost = params.c_d;
    if (const auto it = site_by_id.find(fc.site_id());
        it != site_by_id.end() && it->second->helicopter_access) {
      si.dispatch_cost += params.heli_adder;
    }
    si.p_star = optimal_threshold_for_cost(si.dispatch_cost, params);
    WindowedInstances wi =
        windowed_instances(fc, *labels_it->second, spec, params.tau_h);
    ledger.n_dropped += wi.n_dropped;
    si.instances = std::move(wi.instances);
    sites.push_back(std::move(si));
  }
  std::sort(sites.begin(), sites.end(),
            [](const SiteInstances& a, const SiteInstances& b) {
              return a.site_id < b.site_id;
            });

  ClimTable clim_table;
  if (options.policy == PolicyKind::climatology && !options.climatology_prob) {
    clim_table = climatology_table(options.climatology_labels.empty()
                                       ? input.labels
                                       : options.climatology_labels,
                                   params, options.coverage_min);
  }

  // Issue-major walk so capacity competition is per issuance.
  std::vector<HourStamp> all_issues;
  for (const SiteInstances& si : sites) {
    for (const WindowedInstance& inst : si.instances) {
      all_issues.push_back(inst.issue);
    }
  }
  std::sort(all_issues.begin(), all_issues.end());
  all_issues.erase(std::unique(all_issues.begin(), all_issues.end()),
                   all_issues.end());

  std::vector<PolicyState> states(sites.size());
  std::vector<std::size_t> cursor(sites.size(), 0);
  std::vector<bool> prev_dispatched(sites.size(), false);
  std::vector<HourStamp> prev_issue(sites.size());
  const double crew_budget =
      static_cast<double>(params.crews) * static_cast<double>(params.cadence_h);

  for (const HourStamp issue : all_issues) {
    std::vector<Candidate> here;
    for (std::size_t s = 0; s < sites.size(); ++s) {
      SiteInstances& si = sites[s];
      if (cursor[s] >= si.instances.size()) continue;
      const WindowedInstance& inst = si.instances[cursor[s]];
      if (inst.issue != issue) continue;

      Candidate cand;
      cand.site_index = s;
      cand.instance_index = cursor[s];
      switch (options.policy) {
        case PolicyKind::threshold:
          cand.prob = inst.q;
          cand.decision =
              inst.q >= si.p_star ? Decision::dispatch : Decision::none;
          break;
        case PolicyKind::hysteresis:
          cand.prob = inst.q;
          cand.decision = policy_step(states[s], inst.q, si.p_star, params);
          break;
        case PolicyKind::climatology: {
          const double p =
              options.climatology_prob
                  ? *options.climatology_prob
                  : climatology_prob(clim_table, options.clim_mode,
                                     si.site_id, issue);
          cand.prob = p;
          cand.decision = p >= si.p_star ? Decision::dispatch : Decision::none;
          break;
        }
        case PolicyKind::perfect: {
          cand.prob = static_cast<double>(inst.outcome);
          const double dispatch_cost =
              si.dispatch_cost +
              inst.outcome * (1.0 - params.alpha) * params.loss;
          const double hold_cost = inst.outcome * params.loss;
          cand.decision = dispatch_cost <= hold_cost ? Decision::dispatch
                                                     : Decision::none;
          break;
        }
      }
      here.push_back(cand);
      ++cursor[s];
    }

    // Crew capacity: rank dispatch candidates by expected avoided loss and
    // grant until the crew-hour budget for this issuance is exhausted.
    if (params.capacity) {
      std::vector<std::size_t> wanting;
      for (std::size_t i = 0; i < here.size(); ++i) {
        if (here[i].decision == Decision::dispatch) wanting.push_back(i);
      }
      std::sort(wanting.begin(), wanting.end(),
                [&](std::size_t a, std::size_t b) {
                  const Candidate& ca = here[a];
                  const Candidate& cb = here[b];
                  const double ra = ca.prob * params.alpha * params.loss -
                                    sites[ca.site_index].dispatch_cost;
                  const double rb = cb.prob * params.alpha * params.loss -
                                    sites[cb.site_index].dispatch_cost;
                  if (ra != rb) return ra > rb;
                  return sites[ca.site_index].site_id <
                         sites[cb.site_index].site_id;
                });
      double used = 0.0;
      for (const std::size_t i : wanting) {
        if (used + params.crew_hours <= crew_budget) {
          used += params.crew_hours;
        } else {
          // Overflow becomes hold; flagged in the ledger.
          here[i].decision = Decision::none;
          here[i].capacity_denied = true;
        }
      }
    }

    for (const Candidate& cand : here) {
      const SiteInstances& si = sites[cand.site_index];
      const WindowedInstance& inst = si.instances[cand.instance_index];
      const bool dispatched = cand.decision == Decision::dispatch;

      LedgerEntry entry;
      entry.issue = issue;
      entry.site_id = si.site_id;
      entry.policy = options.policy;
      entry.prob = cand.prob;
      entry.decision = cand.decision;
      entry.outcome = inst.outcome;
      entry.capacity_denied = cand.capacity_denied;

      bool charge_dispatch_cost = dispatched;
      if (options.accounting == Accounting::episode && dispatched &&
          prev_dispatched[cand.site_index] &&
          issue - prev_issue[cand.site_index] == params.cadence_h) {
        charge_dispatch_cost = false;  // same episode, crew already out
      }
      if (dispatched) {
        entry.dispatch_component = charge_dispatch_cost ? si.dispatch_cost : 0.0;
        entry.loss_component =
            inst.outcome * (1.0 - params.alpha) * params.loss;
      } else {
        entry.loss_component = inst.outcome * params.loss;
      }
      entry.cost = entry.dispatch_component + entry.loss_component;
      ledger.entries.push_back(std::move(entry));

      prev_dispatched[cand.site_index] = dispatched;
      prev_issue[cand.site_index] = issue;
    }
  }

  std::sort(ledger.entries.begin(), ledger.entries.end(),
            [](const LedgerEntry& a, const LedgerEntry& b) {
              if (a.issue != b.issue) return a.issue < b.issue;
              return a.site_id < b.site_id;
            });
  return ledger;
}

std::optional<double> rev_from_costs(double c_fcst, double c_clim,
                                     double c_perf) {
  const double denom = c_clim - c_perf;
  if (denom == 0.0) return std::nullopt;
  return (c_clim - c_fcst) / denom;
}

RevResult rev(const EpisodeLedger& fcst, const EpisodeLedger& clim,
              const EpisodeLedger& perf) {
  if (fcst.entries.size() != clim.entries.size() ||
      fcst.entries.size() != perf.entries.size()) {
    throw SchemaError("rev: ledgers cover different instance sets");
  }
  RevResult out;
  out.c_fcst = fcst.mean_cost();
  out.c_clim = clim.mean_cost();
  out.c_perf = perf.mean_cost();
  out.value = rev_from_costs(out.c_fcst, out.c_clim, out.c_perf);
  return out;
}

std::vector<SweepRow> sensitivity_sweep(const SimulationInput& input,
                                        const DecisionParams& base,
                                        std::string_view axis,
                                        std::span<const double> grid,
                                        const SimOptions& options) {
  double DecisionParams::*field = nullptr;
  if (axis == "c_d") field = &DecisionParams::c_d;
  else if (axis == "alpha") field = &DecisionParams::alpha;
  else if (axis == "loss") field = &DecisionParams::loss;
  else throw SchemaError("sweep axis must be c_d, alpha, or loss");

  std::vector<SweepRow> rows;
  for (const double value : grid) {
    SweepRow row;
    row.axis = std::string(axis);
    row.value = value;
    row.is_base = value == base.*field;
    try {
      DecisionParams params = base;
      params.*field = value;
      params.validate();
      row.p_star = optimal_threshold(params);

      SimOptions fcst_options = options;
      EpisodeLedger fcst = simulate(input, params, fcst_options);
      SimOptions clim_options = options;
      clim_options.policy = PolicyKind::climatology;
      EpisodeLedger clim = simulate(input, params, clim_options);
      SimOptions perf_options = options;
      perf_options.policy = PolicyKind::perfect;
      EpisodeLedger perf = simulate(input, params, perf_options);

      const RevResult r = rev(fcst, clim, perf);
      row.rev = r.value;
      row.c_fcst = r.c_fcst;
      row.c_clim = r.c_clim;
      row.c_perf = r.c_perf;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_ledger_csv(const std::filesystem::path& path,
                      const EpisodeLedger& ledger) {
  CsvWriter w(path);
  w.row({"issue_utc", "site_id", "policy", "q", "decision", "outcome",
         "cost_usd", "components"});
  for (const LedgerEntry& e : ledger.entries) {
    std::string components = "c_d=" + format_double(e.dispatch_component) +
                             ";loss=" + format_double(e.loss_component);
    if (e.capacity_denied) components += ";capacity_denied";
    w.row({e.issue.to_string(), e.site_id, std::string(to_string(e.policy)),
           format_double(e.prob), std::string(to_string(e.decision)),
           format_int(e.outcome), format_double(e.cost), components});
  }
}

void write_sweep_csv(const std::filesystem::path& path,
                     std::span<const SweepRow> rows) {
  CsvWriter w(path);
  w.row({"axis", "value", "p_star", "rev", "c_fcst", "c_clim", "c_perf"});
  for (const SweepRow& r : rows) {
    w.row({r.axis, format_double(r.value),
           r.p_star ? format_double(*r.p_star) : "",
           r.rev ? format_double(*r.rev) : "",
           r.c_fcst ? format_double(*r.c_fcst) : "",
           r.c_clim ? format_double(*r.c_clim) : "",
           r.c_perf ? format_double(*r.c_perf) : ""});
  }
}

}  // namespace gridwx
