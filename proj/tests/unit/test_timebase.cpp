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

#include <algorithm>
#include <cmath>
#include <vector>

#include "gridwx/errors.hpp"
#include "gridwx/rng.hpp"
#include "gridwx/timebase.hpp"

using namespace gridwx;

namespace {

HourStamp h0() { return HourStamp::from_ymdh(2024, 1, 1, 0); }

ObservationSeries binary_series(std::vector<int> values,
                                std::vector<Qc> qcs = {}) {
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < values.size(); ++i) {
    samples.push_back({h0() + static_cast<std::int64_t>(i),
                       static_cast<double>(values[i]),
                       qcs.empty() ? Qc::valid : qcs[i]});
  }
  return ObservationSeries("S1", Variable::icing, std::move(samples));
}

}  // namespace

TEST_CASE("hour stamps parse, format, and difference as integer hours") {
  const HourStamp t = HourStamp::parse("2024-11-19T06:00:00Z");
  CHECK(t.to_string() == "2024-11-19T06:00:00Z");
  CHECK(t.hour_of_day() == 6);
  CHECK(t.month() == 11);
  CHECK((t + 25).to_string() == "2024-11-20T07:00:00Z");
  CHECK((t + 25) - t == 25);
  CHECK(HourStamp::parse("1970-01-01T00:00:00Z").hours() == 0);

  CHECK_THROWS_AS(HourStamp::parse("2024-11-19T06:30:00Z"), SchemaError);
  CHECK_THROWS_AS(HourStamp::parse("2024-11-19 06:00:00Z"), SchemaError);
  CHECK_THROWS_AS(HourStamp::parse("2024-02-30T06:00:00Z"), SchemaError);
  CHECK_THROWS_AS(HourStamp::parse("nonsense"), SchemaError);
}

TEST_CASE("series construction rejects unordered or duplicate hours") {
  std::vector<Sample> bad = {{h0() + 1, 0.0, Qc::valid},
                             {h0(), 0.0, Qc::valid}};
  CHECK_THROWS_AS(ObservationSeries("S1", Variable::icing, bad), SchemaError);
  std::vector<Sample> dup = {{h0(), 0.0, Qc::valid}, {h0(), 1.0, Qc::valid}};
  CHECK_THROWS_AS(ObservationSeries("S1", Variable::icing, dup), SchemaError);
}

TEST_CASE("forecast matrix validates lead range and cadence grid") {
  std::vector<ForecastCell> cells = {{h0(), h0() + 6, 1.0}};
  CHECK_NOTHROW(ForecastMatrix("m", "S1", Variable::t2m, 6, cells));
  std::vector<ForecastCell> negative = {{h0() + 6, h0(), 1.0}};
  CHECK_THROWS_AS(ForecastMatrix("m", "S1", Variable::t2m, 6, negative),
                  SchemaError);
  std::vector<ForecastCell> too_far = {{h0(), h0() + 121, 1.0}};
  CHECK_THROWS_AS(ForecastMatrix("m", "S1", Variable::t2m, 6, too_far),
                  SchemaError);
  std::vector<ForecastCell> off_grid = {{h0() + 1, h0() + 2, 1.0}};
  CHECK_THROWS_AS(ForecastMatrix("m", "S1", Variable::t2m, 6, off_grid),
                  SchemaError);
}

TEST_CASE("align pairs forecasts with valid observations at a lead") {
  std::vector<ForecastCell> cells = {{h0(), h0() + 6, 1.5},
                                     {h0(), h0() + 12, 2.5},
                                     {h0() + 6, h0() + 12, 3.5},
                                     {h0() + 6, h0() + 18, 4.5}};
  const ForecastMatrix fc("m", "S1", Variable::t2m, 6, cells);
  std::vector<Sample> samples = {{h0() + 6, 1.0, Qc::valid},
                                 {h0() + 12, 2.0, Qc::valid},
                                 {h0() + 18, 3.0, Qc::valid}};
  const ObservationSeries obs("S1", Variable::t2m, samples);

  const AlignedPairs at6 = align(fc, obs, 6);
  REQUIRE(at6.pairs.size() == 2);
  CHECK(at6.pairs[0] == std::pair<double, double>{1.5, 1.0});
  CHECK(at6.pairs[1] == std::pair<double, double>{3.5, 2.0});
  CHECK(at6.n_dropped == 0);

  SUBCASE("missing-flagged observation is dropped and counted") {
    std::vector<Sample> flagged = samples;
    flagged[0].qc = Qc::missing;
    const ObservationSeries obs2("S1", Variable::t2m, flagged);
    const AlignedPairs out = align(fc, obs2, 6);
    CHECK(out.pairs.size() == 1);
    CHECK(out.n_dropped == 1);
  }

  SUBCASE("empty issue intersection yields an empty sequence, not an error") {
    const AlignedPairs out = align(fc, obs, 3);
    CHECK(out.pairs.empty());
    CHECK(out.n_dropped == 0);
  }

  SUBCASE("site or variable mismatch is a schema error") {
    const ObservationSeries other("S2", Variable::t2m, samples);
    CHECK_THROWS_AS(align(fc, other, 6), SchemaError);
    const ObservationSeries wrong_var("S1", Variable::wind, samples);
    CHECK_THROWS_AS(align(fc, wrong_var, 6), SchemaError);
  }

  SUBCASE("alignment is invariant to input cell ordering") {
    std::vector<ForecastCell> shuffled = {cells[3], cells[0], cells[2],
                                          cells[1]};
    const ForecastMatrix fc2("m", "S1", Variable::t2m, 6, shuffled);
    const AlignedPairs out = align(fc2, obs, 6);
    CHECK(out.pairs == at6.pairs);
  }
}

TEST_CASE("window_any is the max over the half-open window") {
  WindowSpec spec{4, 0.75};
  CHECK(window_any(binary_series({0, 0, 1, 0}), h0(), spec) == 1);
  CHECK(window_any(binary_series({0, 0, 0, 0}), h0(), spec) == 0);

  SUBCASE("event at the window end is excluded (half-open)") {
    CHECK(window_any(binary_series({0, 0, 0, 0, 1}), h0(), spec) == 0);
  }

  SUBCASE("16 of 24 hours present is below the default coverage floor") {
    std::vector<int> values(16, 0);
    const auto series = binary_series(values);
    CHECK_FALSE(window_any(series, h0(), WindowSpec{24, 0.75}).has_value());
    // 18 of 24 = 0.75 exactly passes.
    std::vector<int> more(18, 0);
    CHECK(window_any(binary_series(more), h0(), WindowSpec{24, 0.75}) == 0);
  }

  SUBCASE("suspect hours do not count toward coverage") {
    const auto series = binary_series({0, 1, 0, 0},
                                      {Qc::valid, Qc::suspect, Qc::valid,
                                       Qc::valid});
    CHECK(window_any(series, h0(), WindowSpec{4, 0.9}) == std::nullopt);
    CHECK(window_any(series, h0(), WindowSpec{4, 0.75}) == 0);
  }
}

TEST_CASE("cadence ceiling is exact either side of the epoch") {
  CHECK(ceil_to_cadence(HourStamp(0), 6).hours() == 0);
  CHECK(ceil_to_cadence(HourStamp(1), 6).hours() == 6);
  CHECK(ceil_to_cadence(HourStamp(6), 6).hours() == 6);
  CHECK(ceil_to_cadence(HourStamp(-1), 6).hours() == 0);
  CHECK(ceil_to_cadence(HourStamp(-6), 6).hours() == -6);
  CHECK(ceil_to_cadence(HourStamp(-7), 6).hours() == -6);
  CHECK_THROWS_AS(ceil_to_cadence(HourStamp(0), 0), DomainError);
}

TEST_CASE("window_prob is the union of hourly probabilities") {
  CHECK(window_prob(std::vector<double>{0.5, 0.5}) == doctest::Approx(0.75));
  CHECK(window_prob(std::vector<double>{0.1, 0.2, 0.3}) ==
        doctest::Approx(0.496).epsilon(1e-12));
  CHECK(window_prob(std::vector<double>{0.0, 0.0, 0.0}) == 0.0);
  CHECK(window_prob(std::vector<double>{}) == 0.0);
  CHECK_THROWS_AS(window_prob(std::vector<double>{1.2}), DomainError);
  CHECK_THROWS_AS(window_prob(std::vector<double>{-0.1}), DomainError);
}

TEST_CASE("window_prob properties: range, monotonicity, single spike, concat") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(48));
    std::vector<double> p;
    for (int i = 0; i < n; ++i) p.push_back(rng.uniform01());
    const double q = window_prob(p);
    CHECK(q >= 0.0);
    CHECK(q <= 1.0);

    // Monotone nondecreasing in every coordinate.
    std::vector<double> raised = p;
    const std::size_t k = rng.below(static_cast<std::uint64_t>(n));
    raised[k] = std::min(1.0, raised[k] + rng.uniform01() * (1.0 - raised[k]));
    CHECK(window_prob(raised) >= q - 1e-15);

    // Concatenation identity against the direct product form.
    const std::size_t cut = rng.below(static_cast<std::uint64_t>(n + 1));
    const double qa = window_prob(std::span(p).subspan(0, cut));
    const double qb = window_prob(std::span(p).subspan(cut));
    CHECK(std::abs(q - (1.0 - (1.0 - qa) * (1.0 - qb))) < 1e-12);
  }

  // Exactly one nonzero hour: the union equals that probability.
  std::vector<double> spike(24, 0.0);
  spike[7] = 0.37;
  CHECK(window_prob(spike) == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("poisson window approximation and its second-order bound") {
  CHECK(window_prob_poisson(0.0, 24) == 0.0);
  CHECK(window_prob_poisson(0.009734, 24) ==
        doctest::Approx(0.20833424281411927).epsilon(1e-12));
  CHECK(window_prob_poisson(1.0, 1) ==
        doctest::Approx(0.6321205588285577).epsilon(1e-12));
  CHECK_THROWS_AS(window_prob_poisson(-0.1, 24), DomainError);
  CHECK_THROWS_AS(window_prob_poisson(1.1, 24), DomainError);
  CHECK_THROWS_AS(window_prob_poisson(0.5, 0), DomainError);

  // |union - poisson| <= H p^2 for constant hourly probability p <= 0.01.
  for (const double p : {0.0001, 0.001, 0.005, 0.01}) {
    for (const int horizon : {1, 6, 24, 48}) {
      const std::vector<double> hourly(static_cast<std::size_t>(horizon), p);
      const double exact = window_prob(hourly);
      const double approx = window_prob_poisson(p, horizon);
      CHECK(std::abs(exact - approx) <= horizon * p * p);
    }
  }
}

TEST_CASE("windowed_instances drops issues with gaps or poor label coverage") {
  std::vector<ForecastCell> cells;
  for (int lead = 0; lead < 4; ++lead) {
    cells.push_back({h0(), h0() + lead, 0.2});
    if (lead != 2) cells.push_back({h0() + 6, h0() + 6 + lead, 0.2});
  }
  const ForecastMatrix fc("m", "S1", Variable::icing, 6, cells);
  std::vector<int> labels(16, 0);
  labels[1] = 1;
  const auto series = binary_series(labels);
  const WindowedInstances out =
      windowed_instances(fc, series, WindowSpec{4, 0.75});
  REQUIRE(out.instances.size() == 1);  // second issue lacks lead 2
  CHECK(out.n_dropped == 1);
  CHECK(out.instances[0].issue == h0());
  CHECK(out.instances[0].outcome == 1);
  CHECK(out.instances[0].q ==
        doctest::Approx(1.0 - std::pow(0.8, 4)).epsilon(1e-12));

  SUBCASE("a positive start lead shifts and shortens the window") {
    const WindowedInstances shifted =
        windowed_instances(fc, series, WindowSpec{4, 0.75}, 2);
    REQUIRE(shifted.instances.size() == 1);
    CHECK(shifted.instances[0].outcome == 0);  // event at hour 1 now outside
    CHECK(shifted.instances[0].q ==
          doctest::Approx(1.0 - std::pow(0.8, 2)).epsilon(1e-12));
  }
}
