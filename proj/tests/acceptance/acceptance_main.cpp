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

// Acceptance suite: every release gate runs here with its tolerance pinned
// in code, one pass/fail line per criterion. The CLI binary for the
// end-to-end gate arrives via GRIDWX_CLI.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridwx/csv.hpp"
#include "gridwx/decide.hpp"
#include "gridwx/makkonen.hpp"
#include "gridwx/oracles.hpp"
#include "gridwx/rng.hpp"
#include "gridwx/synth.hpp"
#include "gridwx/timebase.hpp"
#include "gridwx/verify.hpp"

using namespace gridwx;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int number;
  std::string name;
  std::function<void(std::string& detail)> body;  // sets detail on failure
  double max_ms = 0.0;                            // 0 = no runtime gate
};

struct Harness {
  std::vector<Criterion> criteria;
  int failures = 0;

  void add(int number, const std::string& name, double max_ms,
           std::function<void(std::string&)> body) {
    criteria.push_back({number, name, std::move(body), max_ms});
  }

  int run() {
    for (const Criterion& c : criteria) {
      std::string detail;
      const auto start = std::chrono::steady_clock::now();
      try {
        c.body(detail);
      } catch (const std::exception& e) {
        if (detail.empty()) detail = e.what();
        else detail += std::string("; ") + e.what();
      }
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
      if (detail.empty() && c.max_ms > 0.0 && ms > c.max_ms) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "runtime %.1f ms exceeds %.0f ms", ms,
                      c.max_ms);
        detail = buf;
      }
      const bool pass = detail.empty();
      if (!pass) ++failures;
      std::printf("[%s] %02d %s (%.1f ms)%s%s\n", pass ? "PASS" : "FAIL",
                  c.number, c.name.c_str(), ms, pass ? "" : ": ",
                  detail.c_str());
      std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n",
                static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
  }
};

void expect(bool ok, const std::string& message, std::string& detail) {
  if (!ok && detail.empty()) detail = message;
}

// --- shared helpers -------------------------------------------------------

synth::ScenarioSpec scenario_spec(std::uint64_t seed, int sites, int days) {
  synth::ScenarioSpec spec;
  spec.seed = seed;
  spec.n_sites = sites;
  spec.span_hours = 24 * days;
  return spec;
}

struct PolicyLedgers {
  EpisodeLedger fcst;
  EpisodeLedger clim;
  EpisodeLedger perf;
};

PolicyLedgers run_policies(const std::vector<ForecastMatrix>& forecasts,
                           const synth::Scenario& scenario,
                           const DecisionParams& params) {
  const SimulationInput input{forecasts, scenario.labels, scenario.sites};
  SimOptions fcst_options;
  SimOptions clim_options;
  clim_options.policy = PolicyKind::climatology;
  SimOptions perf_options;
  perf_options.policy = PolicyKind::perfect;
  return {simulate(input, params, fcst_options),
          simulate(input, params, clim_options),
          simulate(input, params, perf_options)};
}

int run_cli(const std::string& binary, const std::string& args,
            const fs::path& log) {
  const std::string cmd = binary + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

/// Byte comparison of two output trees; manifests are compared after
/// dropping the wall-time field, which is the one value allowed to differ.
bool trees_match(const fs::path& a, const fs::path& b, std::string& detail) {
  std::vector<fs::path> rel_a;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (entry.is_regular_file()) rel_a.push_back(fs::relative(entry.path(), a));
  }
  std::vector<fs::path> rel_b;
  for (const auto& entry : fs::recursive_directory_iterator(b)) {
    if (entry.is_regular_file()) rel_b.push_back(fs::relative(entry.path(), b));
  }
  std::sort(rel_a.begin(), rel_a.end());
  std::sort(rel_b.begin(), rel_b.end());
  if (rel_a != rel_b) {
    detail = "file sets differ under " + a.string() + " vs " + b.string();
    return false;
  }
  for (const fs::path& rel : rel_a) {
    const std::string text_a = read_text_file(a / rel);
    const std::string text_b = read_text_file(b / rel);
    if (rel.filename() == "manifest.json") {
      // Wall time varies; argv and input paths carry the run directories.
      // Input hashes, the config echo, seed, and run extras must all match.
      const auto normalize = [](const std::string& text) {
        nlohmann::json j = nlohmann::json::parse(text);
        j.erase("wall_time_ms");
        j.erase("argv");
        if (j.contains("inputs")) {
          nlohmann::json hashes = nlohmann::json::array();
          for (const auto& input : j.at("inputs")) {
            hashes.push_back(input.at("hash"));
          }
          j["inputs"] = std::move(hashes);
        }
        return j;
      };
      if (normalize(text_a) != normalize(text_b)) {
        detail = "manifest mismatch at " + rel.string();
        return false;
      }
    } else if (text_a != text_b) {
      detail = "byte mismatch at " + rel.string();
      return false;
    }
  }
  return true;
}

// Upper-tail binomial p-value for the one-sided sign test.
double sign_test_p_value(int wins, int trials) {
  double p = 0.0;
  for (int i = wins; i <= trials; ++i) {
    const double log_choose = std::lgamma(trials + 1.0) -
                              std::lgamma(i + 1.0) -
                              std::lgamma(trials - i + 1.0);
    p += std::exp(log_choose - trials * std::log(2.0));
  }
  return p;
}

}  // namespace

int main() {
  Harness harness;

  harness.add(1, "optimal threshold matches the base scenario", 1.0,
              [](std::string& detail) {
                const DecisionParams params;
                const double p_star = optimal_threshold(params);
                expect(std::abs(p_star - 0.20833) <= 0.0005,
                       "p* = " + format_double(p_star), detail);
              });

  harness.add(2, "REV identity on the reported cost triplet", 1.0,
              [](std::string& detail) {
                const auto value = rev_from_costs(51913.0, 69064.0, 39055.0);
                expect(value.has_value(), "REV undefined", detail);
                if (value) {
                  expect(std::abs(*value - 0.5715) <= 0.0005,
                         "REV = " + format_double(*value), detail);
                }
              });

  harness.add(3, "threshold mapping round trip to 1e-12", 1000.0,
              [](std::string& detail) {
                Rng rng(301);
                for (int trial = 0; trial < 1000; ++trial) {
                  const int horizon = 1 + static_cast<int>(rng.below(48));
                  const double reachable =
                      1.0 - std::exp(-static_cast<double>(horizon));
                  const double p = rng.uniform01() * reachable;
                  const double back = window_prob_poisson(
                      mean_prob_threshold(p, horizon), horizon);
                  if (std::abs(back - p) > 1e-12) {
                    detail = "round trip error " + format_double(back - p);
                    return;
                  }
                }
              });

  harness.add(4, "window probability matches the product oracle", 2000.0,
              [](std::string& detail) {
                Rng rng(304);
                for (int trial = 0; trial < 10000; ++trial) {
                  const int len = 1 + static_cast<int>(rng.below(48));
                  std::vector<double> p;
                  p.reserve(static_cast<std::size_t>(len));
                  long double survival = 1.0L;
                  for (int i = 0; i < len; ++i) {
                    p.push_back(rng.uniform01());
                    survival *= 1.0L - static_cast<long double>(p.back());
                  }
                  const double oracle = static_cast<double>(1.0L - survival);
                  if (std::abs(window_prob(p) - oracle) > 1e-12) {
                    detail = "union probability off at length " +
                             std::to_string(len);
                    return;
                  }
                }
              });

  harness.add(
      5, "AP and AUC equal brute force on all patterns to n=10", 30000.0,
      [](std::string& detail) {
        Rng rng(305);
        for (int n = 1; n <= 10 && detail.empty(); ++n) {
          for (int pattern = 0; pattern < (1 << n); ++pattern) {
            std::vector<double> scores;
            std::vector<int> labels;
            std::set<double> used;
            for (int i = 0; i < n; ++i) {
              double s = rng.uniform01();
              while (!used.insert(s).second) s = rng.uniform01();
              scores.push_back(s);
              labels.push_back((pattern >> i) & 1);
            }
            const auto oracle =
                synth::brute_force_rank_metrics(scores, labels);
            const auto pr = pr_curve_and_ap(scores, labels);
            const auto roc = roc_and_auc(scores, labels);
            if (pr.has_value() != oracle.ap.has_value() ||
                roc.has_value() != oracle.auc.has_value() ||
                (pr && pr->ap != *oracle.ap) ||
                (roc && roc->auc != *oracle.auc)) {
              detail = "mismatch at n=" + std::to_string(n) +
                       " pattern=" + std::to_string(pattern);
              return;
            }
          }
        }
        for (int trial = 0; trial < 1000 && detail.empty(); ++trial) {
          const int n = 2 + static_cast<int>(rng.below(11));
          std::vector<double> scores;
          std::vector<int> labels;
          for (int i = 0; i < n; ++i) {
            scores.push_back(std::round(rng.uniform01() * 3.0) / 3.0);
            labels.push_back(static_cast<int>(rng.below(2)));
          }
          const auto oracle = synth::brute_force_rank_metrics(scores, labels);
          const auto pr = pr_curve_and_ap(scores, labels);
          const auto roc = roc_and_auc(scores, labels);
          if (pr.has_value() != oracle.ap.has_value() ||
              roc.has_value() != oracle.auc.has_value() ||
              (pr && pr->ap != *oracle.ap) ||
              (roc && roc->auc != *oracle.auc)) {
            detail = "tied-score mismatch at trial " + std::to_string(trial);
            return;
          }
        }
      });

  harness.add(6, "CSI equals intersection-over-union exactly", 0.0,
              [](std::string& detail) {
                Rng rng(306);
                for (int trial = 0; trial < 1000; ++trial) {
                  const int n = 1 + static_cast<int>(rng.below(60));
                  std::vector<double> probs;
                  std::vector<int> labels;
                  for (int i = 0; i < n; ++i) {
                    probs.push_back(rng.uniform01());
                    labels.push_back(static_cast<int>(rng.below(2)));
                  }
                  const double tau = rng.uniform01();
                  const auto ours = csi(confusion(probs, labels, tau));
                  long long inter = 0;
                  long long uni = 0;
                  for (int i = 0; i < n; ++i) {
                    const bool alert = probs[static_cast<std::size_t>(i)] >= tau;
                    const bool event = labels[static_cast<std::size_t>(i)] == 1;
                    if (alert && event) ++inter;
                    if (alert || event) ++uni;
                  }
                  if (uni == 0) {
                    if (ours.has_value()) {
                      detail = "CSI defined on the empty union";
                      return;
                    }
                    continue;
                  }
                  const double iou = static_cast<double>(inter) /
                                     static_cast<double>(uni);
                  if (!ours || *ours != iou) {
                    detail = "CSI != IoU at trial " + std::to_string(trial);
                    return;
                  }
                }
              });

  harness.add(
      7, "policy identities and threshold optimality", 0.0,
      [](std::string& detail) {
        // REV(perfect) = 1 and REV(climatology) = 0 on every scenario.
        for (std::uint64_t seed = 1; seed <= 5 && detail.empty(); ++seed) {
          synth::ScenarioSpec spec = scenario_spec(seed, 4, 90);
          spec.lambdas = {0.5};
          const synth::Scenario scenario = synth::gen_scenario(spec);
          const PolicyLedgers ledgers =
              run_policies(scenario.forecasts[0].second, scenario,
                           DecisionParams{});
          const auto rev_perf =
              rev(ledgers.perf, ledgers.clim, ledgers.perf).value;
          const auto rev_clim =
              rev(ledgers.clim, ledgers.clim, ledgers.perf).value;
          expect(rev_perf.has_value() && *rev_perf == 1.0,
                 "REV(perfect) != 1 at seed " + std::to_string(seed), detail);
          expect(rev_clim.has_value() && *rev_clim == 0.0,
                 "REV(climatology) != 0 at seed " + std::to_string(seed),
                 detail);
        }
        if (!detail.empty()) return;

        // p* maximizes expected-cost REV over every alert threshold.
        Rng rng(307);
        const DecisionParams params;
        const double p_star = optimal_threshold(params);
        for (int trial = 0; trial < 300 && detail.empty(); ++trial) {
          const int n = 2 + static_cast<int>(rng.below(11));
          std::vector<double> q;
          for (int i = 0; i < n; ++i) q.push_back(rng.uniform01());
          double clim_prob = 0.0;
          for (const double qi : q) clim_prob += qi;
          clim_prob /= static_cast<double>(n);

          const auto expected_fcst_cost = [&](double tau) {
            double total = 0.0;
            for (const double qi : q) {
              total += qi >= tau
                           ? params.c_d +
                                 qi * (1.0 - params.alpha) * params.loss
                           : qi * params.loss;
            }
            return total / static_cast<double>(n);
          };
          double e_clim = 0.0;
          double e_perf = 0.0;
          for (const double qi : q) {
            const double dispatch =
                params.c_d + qi * (1.0 - params.alpha) * params.loss;
            const double hold = qi * params.loss;
            e_clim += clim_prob >= p_star ? dispatch : hold;
            e_perf += std::min(dispatch, hold);
          }
          e_clim /= static_cast<double>(n);
          e_perf /= static_cast<double>(n);
          if (e_clim == e_perf) continue;  // degenerate draw

          const auto rev_at = [&](double tau) {
            return (e_clim - expected_fcst_cost(tau)) / (e_clim - e_perf);
          };
          double best = rev_at(p_star);
          std::vector<double> taus = {0.0, 1.0, 1.1};
          for (const double qi : q) {
            taus.push_back(qi);
            taus.push_back(std::min(1.0, qi + 1e-9));
          }
          for (const double tau : taus) {
            if (rev_at(tau) > best + 1e-9) {
              detail = "threshold " + format_double(tau) +
                       " beats p* at trial " + std::to_string(trial);
              return;
            }
          }
        }
      });

  harness.add(
      8, "REV is nondecreasing in forecast skill (sign test)", 60000.0,
      [](std::string& detail) {
        const std::vector<double> lambdas = {0.0, 0.25, 0.5, 0.75, 1.0};
        const int n_seeds = 20;
        std::vector<std::vector<double>> rev_matrix;
        for (int seed = 1; seed <= n_seeds; ++seed) {
          synth::ScenarioSpec spec =
              scenario_spec(static_cast<std::uint64_t>(seed), 4, 60);
          spec.lambdas = lambdas;
          spec.logit_jitter_sd = 0.75;
          const synth::Scenario scenario = synth::gen_scenario(spec);
          std::vector<double> revs;
          for (const auto& [lambda, family] : scenario.forecasts) {
            const PolicyLedgers ledgers =
                run_policies(family, scenario, DecisionParams{});
            const auto value =
                rev(ledgers.fcst, ledgers.clim, ledgers.perf).value;
            if (!value) {
              detail = "REV undefined at seed " + std::to_string(seed);
              return;
            }
            revs.push_back(*value);
          }
          rev_matrix.push_back(std::move(revs));
        }
        // Mean across seeds is nondecreasing in lambda.
        for (std::size_t j = 1; j < lambdas.size(); ++j) {
          double prev = 0.0;
          double curr = 0.0;
          for (const auto& row : rev_matrix) {
            prev += row[j - 1];
            curr += row[j];
          }
          if (curr < prev - 1e-12) {
            detail = "mean REV decreases between lambda " +
                     format_double(lambdas[j - 1]) + " and " +
                     format_double(lambdas[j]);
            return;
          }
        }
        // One-sided sign test over per-seed adjacent differences.
        int wins = 0;
        int trials = 0;
        for (const auto& row : rev_matrix) {
          for (std::size_t j = 1; j < row.size(); ++j) {
            if (row[j] == row[j - 1]) continue;
            ++trials;
            if (row[j] > row[j - 1]) ++wins;
          }
        }
        const double p = trials == 0 ? 1.0 : sign_test_p_value(wins, trials);
        expect(p < 0.01,
               "sign test p = " + format_double(p) + " over " +
                   std::to_string(trials) + " pairs",
               detail);
      });

  harness.add(
      9, "hysteresis never re-dispatches inside the persistence window",
      10000.0, [](std::string& detail) {
        const DecisionParams params;
        const double p_star = optimal_threshold(params);
        const double p_off = params.p_off_factor * p_star;
        const double p_on = params.p_on_factor * p_star;
        const std::array<double, 5> grid = {0.0, 0.5 * p_off, p_off, p_on,
                                            1.0};
        for (int code = 0; code < 5 * 5 * 5 * 5 * 5 * 5; ++code) {
          int c = code;
          std::array<double, 6> q{};
          for (int step = 0; step < 6; ++step) {
            q[static_cast<std::size_t>(step)] =
                grid[static_cast<std::size_t>(c % 5)];
            c /= 5;
          }
          PolicyState state;
          std::array<Tier, 6> tiers{};
          for (int step = 0; step < 6; ++step) {
            policy_step(state, q[static_cast<std::size_t>(step)], p_star,
                        params);
            tiers[static_cast<std::size_t>(step)] = state.tier;
            if (state.exceed_count < 0 ||
                state.exceed_count > params.persistence_k) {
              detail = "counter left [0, k] at code " + std::to_string(code);
              return;
            }
          }
          for (int step = 1; step < 6; ++step) {
            const auto s = static_cast<std::size_t>(step);
            if (tiers[s - 1] == Tier::dispatched &&
                tiers[s] != Tier::dispatched && q[s] >= p_off) {
              detail = "stood down above p_off at code " + std::to_string(code);
              return;
            }
          }
          for (int i = 0; i < 6; ++i) {
            if (tiers[static_cast<std::size_t>(i)] != Tier::dispatched) {
              continue;
            }
            for (int l = i + 2; l < 6; ++l) {
              if (tiers[static_cast<std::size_t>(l)] != Tier::dispatched) {
                continue;
              }
              bool idle_between = false;
              double min_q = 1.0;
              for (int j = i + 1; j <= l; ++j) {
                if (j < l &&
                    tiers[static_cast<std::size_t>(j)] != Tier::dispatched) {
                  idle_between = true;
                }
                min_q = std::min(min_q, q[static_cast<std::size_t>(j)]);
              }
              if (idle_between && min_q >= p_off) {
                detail = "dispatch-idle-dispatch above p_off at code " +
                         std::to_string(code);
                return;
              }
            }
          }
        }
      });

  harness.add(
      10, "wind anchors to 1e-9 and exact feasibility gating", 0.0,
      [](std::string& detail) {
        Rng rng(310);
        for (int trial = 0; trial < 10000; ++trial) {
          const double v10 = rng.uniform(0.01, 45.0);
          const double v100 = rng.uniform(0.01, 45.0);
          if (std::abs(wind_at_height(v10, v100, 10.0) - v10) > 1e-9 * v10 ||
              std::abs(wind_at_height(v10, v100, 100.0) - v100) >
                  1e-9 * v100) {
            detail = "anchor reproduction failed";
            return;
          }
        }
        const IcingProxyParams params;
        int checked = 0;
        for (int trial = 0; trial < 10000; ++trial) {
          const int mask = trial % 8;
          const bool v_ok = mask & 1;
          const bool t_ok = mask & 2;
          const bool lwc_ok = mask & 4;
          const double v = v_ok ? rng.uniform(1e-3, 40.0)
                                : -rng.uniform(0.0, 10.0);
          double t = 0.0;
          if (t_ok) {
            // Include both closed boundaries.
            const int pick = trial % 5;
            if (pick == 0) t = 260.0;
            else if (pick == 1) t = 275.0;
            else t = rng.uniform(260.0, 275.0);
          } else {
            t = (trial % 2 == 0) ? rng.uniform(275.0 + 1e-9, 320.0)
                                 : rng.uniform(200.0, 260.0 - 1e-9);
          }
          const double lwc = lwc_ok ? rng.uniform(1.0000001e-6, 1e-4)
                                    : rng.uniform(0.0, 1e-6);
          const double rate = proxy_rate(v, t, lwc, params);
          const bool feasible = v_ok && t_ok && lwc_ok;
          if (feasible && rate != v * (lwc * 1e3)) {
            detail = "feasible rate mismatch";
            return;
          }
          if (!feasible && rate != 0.0) {
            detail = "infeasible input produced a nonzero rate";
            return;
          }
          ++checked;
        }
        expect(checked == 10000, "grid incomplete", detail);
      });

  harness.add(
      11, "one-year desk pipeline in under 10 s, byte-stable across jobs",
      0.0, [](std::string& detail) {
        const char* env = std::getenv("GRIDWX_CLI");
        if (env == nullptr) {
          detail = "GRIDWX_CLI not set";
          return;
        }
        const std::string cli(env);
        const fs::path base = fs::temp_directory_path() / "gridwx_acceptance";
        fs::remove_all(base);
        fs::create_directories(base);
        const fs::path log = base / "cli.log";

        const auto pipeline = [&](const fs::path& root, int jobs,
                                  std::string& step_detail) {
          const std::string j = " --jobs " + std::to_string(jobs);
          const std::string catalog =
              " --catalog " + (root / "data" / "catalog.json").string();
          const std::vector<std::string> steps = {
              "synth --seed 20260809 --sites 14 --hours 8760 --lambdas 0.5"
              " --out " + (root / "data").string() + j,
              "index" + catalog + " --out " + (root / "index").string() + j,
              "label" + catalog + " --mode sygivre --out " +
                  (root / "label_sygivre").string() + j,
              "label" + catalog + " --mode windfarm --out " +
                  (root / "label_windfarm").string() + j,
              "verify" + catalog + " --lead-hours 6,12 --out " +
                  (root / "verify").string() + j,
              "decide" + catalog + " --out " + (root / "decide").string() + j,
              "sweep" + catalog +
                  " --axis c_d --grid 25000:75000:25000 --out " +
                  (root / "sweep").string() + j,
          };
          for (const std::string& step : steps) {
            if (run_cli(cli, step, log) != 0) {
              step_detail = "CLI step failed: " + step;
              return;
            }
          }
        };

        const auto start = std::chrono::steady_clock::now();
        pipeline(base / "run1", 1, detail);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        if (!detail.empty()) return;
        if (seconds >= 10.0) {
          char buf[64];
          std::snprintf(buf, sizeof(buf), "pipeline took %.2f s", seconds);
          detail = buf;
          return;
        }
        pipeline(base / "run2", 4, detail);
        if (!detail.empty()) return;
        trees_match(base / "run1", base / "run2", detail);
      });

  harness.add(12, "synthetic sygivre base rate within 0.3 points of 3.68%",
              0.0, [](std::string& detail) {
                synth::ScenarioSpec spec = scenario_spec(20260809, 14, 365);
                spec.lambdas = {1.0};
                const synth::Scenario scenario = synth::gen_scenario(spec);
                long long events = 0;
                long long hours = 0;
                for (const CycleCounterSeries& counter :
                     scenario.cycle_counts) {
                  const SygivreLabels labels = sygivre_to_binary(counter);
                  for (const Sample& s : labels.binary.samples()) {
                    if (s.qc != Qc::valid) continue;
                    events += s.value == 1.0 ? 1 : 0;
                    ++hours;
                  }
                }
                const double rate = static_cast<double>(events) /
                                    static_cast<double>(hours);
                expect(std::abs(rate - 0.0368) <= 0.003,
                       "labeled base rate " + format_double(rate), detail);
              });

  return harness.run();
}
