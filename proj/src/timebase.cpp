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

#include "gridwx/timebase.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "gridwx/errors.hpp"

namespace gridwx {

namespace {

// Proleptic Gregorian calendar <-> epoch day conversions (Howard Hinnant's
// algorithms, public domain).
constexpr std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
  int year;
  unsigned month;
  unsigned day;
};

constexpr CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {static_cast<int>(y + (m <= 2)), m, d};
}

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  return (a >= 0) ? a / b : -((-a + b - 1) / b);
}

int parse_fixed_uint(std::string_view text, std::size_t pos, std::size_t len,
                     std::string_view full) {
  int value = 0;
  const char* first = text.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc() || ptr != first + len) {
    throw SchemaError("bad hour stamp '" + std::string(full) + "'");
  }
  return value;
}

}  // namespace

HourStamp HourStamp::from_ymdh(int year, unsigned month, unsigned day,
                               unsigned hour) {
  return HourStamp(days_from_civil(year, month, day) * 24 +
                   static_cast<std::int64_t>(hour));
}

HourStamp HourStamp::parse(std::string_view iso) {
  // YYYY-MM-DDTHH:00:00Z, 20 characters, no other shapes accepted.
  if (iso.size() != 20 || iso[4] != '-' || iso[7] != '-' || iso[10] != 'T' ||
      iso[13] != ':' || iso[16] != ':' || iso[19] != 'Z' ||
      iso.substr(14, 2) != "00" || iso.substr(17, 2) != "00") {
    throw SchemaError("bad hour stamp '" + std::string(iso) +
                      "' (want YYYY-MM-DDTHH:00:00Z)");
  }
  const int y = parse_fixed_uint(iso, 0, 4, iso);
  const int m = parse_fixed_uint(iso, 5, 2, iso);
  const int d = parse_fixed_uint(iso, 8, 2, iso);
  const int h = parse_fixed_uint(iso, 11, 2, iso);
  if (m < 1 || m > 12 || d < 1 || d > 31 || h < 0 || h > 23) {
    throw SchemaError("bad hour stamp '" + std::string(iso) + "'");
  }
  const HourStamp out = from_ymdh(y, static_cast<unsigned>(m),
                                  static_cast<unsigned>(d),
                                  static_cast<unsigned>(h));
  if (out.to_string() != iso) {
    throw SchemaError("bad hour stamp '" + std::string(iso) + "'");
  }
  return out;
}

std::string HourStamp::to_string() const {
  const std::int64_t day = floor_div(hours_, 24);
  const int h = static_cast<int>(hours_ - day * 24);
  const CivilDate c = civil_from_days(day);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:00:00Z", c.year, c.month,
                c.day, h);
  return std::string(buf);
}

int HourStamp::hour_of_day() const {
  return static_cast<int>(hours_ - floor_div(hours_, 24) * 24);
}

int HourStamp::month() const {
  return static_cast<int>(civil_from_days(floor_div(hours_, 24)).month);
}

std::string_view to_string(Qc qc) {
  switch (qc) {
    case Qc::valid: return "valid";
    case Qc::missing: return "missing";
    case Qc::suspect: return "suspect";
  }
  return "valid";
}

Qc qc_from_string(std::string_view text) {
  if (text == "valid" || text.empty()) return Qc::valid;
  if (text == "missing") return Qc::missing;
  if (text == "suspect") return Qc::suspect;
  throw SchemaError("unknown qc flag '" + std::string(text) + "'");
}

std::string_view to_string(Variable v) {
  switch (v) {
    case Variable::t2m: return "t2m";
    case Variable::precip: return "precip";
    case Variable::wind: return "wind";
    case Variable::icing: return "icing";
    case Variable::icing_rate: return "icing_rate";
  }
  return "t2m";
}

Variable variable_from_string(std::string_view text) {
  if (text == "t2m") return Variable::t2m;
  if (text == "precip") return Variable::precip;
  if (text == "wind") return Variable::wind;
  if (text == "icing") return Variable::icing;
  if (text == "icing_rate") return Variable::icing_rate;
  throw SchemaError("unknown variable '" + std::string(text) + "'");
}

std::string_view unit_of(Variable v) {
  switch (v) {
    case Variable::t2m: return "K";
    case Variable::precip: return "mm/h";
    case Variable::wind: return "m/s";
    case Variable::icing: return "probability";
    case Variable::icing_rate: return "g m-2 s-1";
  }
  return "";
}

std::pair<double, double> sanity_band(Variable v) {
  switch (v) {
    case Variable::t2m: return {180.0, 340.0};
    case Variable::precip: return {0.0, 200.0};
    case Variable::wind: return {0.0, 120.0};
    case Variable::icing: return {0.0, 1.0};
    case Variable::icing_rate: return {0.0, 1.0e6};
  }
  return {0.0, 0.0};
}

ObservationSeries::ObservationSeries(std::string site_id, Variable variable,
                                     std::vector<Sample> samples)
    : site_id_(std::move(site_id)),
      variable_(variable),
      samples_(std::move(samples)) {
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i - 1].hour < samples_[i].hour)) {
      throw SchemaError("series " + site_id_ + "/" +
                        std::string(to_string(variable_)) +
                        ": timestamps not strictly increasing at " +
                        samples_[i].hour.to_string());
    }
  }
}

const Sample* ObservationSeries::find(HourStamp hour) const {
  const auto it = std::lower_bound(
      samples_.begin(), samples_.end(), hour,
      [](const Sample& s, HourStamp h) { return s.hour < h; });
  if (it == samples_.end() || it->hour != hour) return nullptr;
  return &*it;
}

ForecastMatrix::ForecastMatrix(std::string model_id, std::string site_id,
                               Variable variable, int cadence_h,
                               std::vector<ForecastCell> cells)
    : model_id_(std::move(model_id)),
      site_id_(std::move(site_id)),
      variable_(variable),
      cadence_h_(cadence_h),
      cells_(std::move(cells)) {
  if (cadence_h_ < 1) throw DomainError("forecast cadence must be >= 1 h");
  std::sort(cells_.begin(), cells_.end(),
            [](const ForecastCell& a, const ForecastCell& b) {
              if (a.issue != b.issue) return a.issue < b.issue;
              return a.valid < b.valid;
            });
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const ForecastCell& c = cells_[i];
    const std::int64_t lead = c.valid - c.issue;
    if (lead < 0 || lead > kMaxLeadHours) {
      throw SchemaError("forecast " + model_id_ + "/" + site_id_ +
                        ": lead " + std::to_string(lead) +
                        " h outside [0, 120] at issue " + c.issue.to_string());
    }
    if (c.issue.hours() % cadence_h_ != 0) {
      throw SchemaError("forecast " + model_id_ + "/" + site_id_ + ": issue " +
                        c.issue.to_string() + " off the " +
                        std::to_string(cadence_h_) + " h cadence grid");
    }
    if (i > 0 && cells_[i - 1].issue == c.issue &&
        cells_[i - 1].valid == c.valid) {
      throw SchemaError("forecast " + model_id_ + "/" + site_id_ +
                        ": duplicate cell at issue " + c.issue.to_string() +
                        " valid " + c.valid.to_string());
    }
  }
}

std::optional<double> ForecastMatrix::at(HourStamp issue,
                                         HourStamp valid) const {
  const auto it = std::lower_bound(
      cells_.begin(), cells_.end(), std::make_pair(issue, valid),
      [](const ForecastCell& c, const std::pair<HourStamp, HourStamp>& key) {
        if (c.issue != key.first) return c.issue < key.first;
        return c.valid < key.second;
      });
  if (it == cells_.end() || it->issue != issue || it->valid != valid) {
    return std::nullopt;
  }
  return it->value;
}

std::vector<HourStamp> ForecastMatrix::issue_times() const {
  std::vector<HourStamp> out;
  for (const ForecastCell& c : cells_) {
    if (out.empty() || out.back() != c.issue) out.push_back(c.issue);
  }
  return out;
}

void WindowSpec::validate() const {
  if (length_hours < 1) throw DomainError("window length must be >= 1 h");
  if (!(coverage_min > 0.0 && coverage_min <= 1.0)) {
    throw DomainError("coverage_min must lie in (0, 1]");
  }
}

AlignedPairs align(const ForecastMatrix& fc, const ObservationSeries& obs,
                   int lead_h) {
  if (lead_h < 0) throw DomainError("lead must be >= 0 h");
  if (fc.site_id() != obs.site_id() || fc.variable() != obs.variable()) {
    throw SchemaError("align: forecast " + fc.site_id() + "/" +
                      std::string(to_string(fc.variable())) +
                      " does not match observations " + obs.site_id() + "/" +
                      std::string(to_string(obs.variable())));
  }
  AlignedPairs out;
  for (const HourStamp issue : fc.issue_times()) {
    const std::optional<double> value = fc.at(issue, issue + lead_h);
    if (!value) continue;
    const Sample* sample = obs.find(issue + lead_h);
    if (sample == nullptr || sample->qc != Qc::valid) {
      ++out.n_dropped;
      continue;
    }
    out.pairs.emplace_back(*value, sample->value);
    out.issues.push_back(issue);
  }
  return out;
}

std::optional<int> window_any(const ObservationSeries& y, HourStamp start,
                              const WindowSpec& spec) {
  spec.validate();
  int available = 0;
  int any = 0;
  for (std::int64_t h = 0; h < spec.length_hours; ++h) {
    const Sample* s = y.find(start + h);
    if (s == nullptr || s->qc != Qc::valid) continue;
    ++available;
    if (s->value > 0.0) any = 1;
  }
  const double coverage =
      static_cast<double>(available) / static_cast<double>(spec.length_hours);
  if (coverage < spec.coverage_min) return std::nullopt;
  return any;
}

HourStamp ceil_to_cadence(HourStamp t, int cadence_h) {
  if (cadence_h < 1) throw DomainError("ceil_to_cadence: cadence must be >= 1");
  const std::int64_t cadence = cadence_h;
  const std::int64_t day = floor_div(t.hours(), cadence);
  const std::int64_t floored = day * cadence;
  return HourStamp(floored == t.hours() ? floored : floored + cadence);
}

double window_prob(std::span<const double> hourly_probs) {
  double survival = 1.0;
  for (const double p : hourly_probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DomainError("window_prob: probability outside [0, 1]");
    }
    survival *= 1.0 - p;
  }
  return 1.0 - survival;
}

double window_prob_poisson(double mean_prob, int window_hours) {
  if (!(mean_prob >= 0.0 && mean_prob <= 1.0)) {
    throw DomainError("window_prob_poisson: probability outside [0, 1]");
  }
  if (window_hours < 1) throw DomainError("window_prob_poisson: H must be >= 1");
  return 1.0 - std::exp(-static_cast<double>(window_hours) * mean_prob);
}

WindowedInstances windowed_instances(const ForecastMatrix& fc,
                                     const ObservationSeries& labels,
                                     const WindowSpec& spec, int start_lead_h) {
  spec.validate();
  if (start_lead_h < 0 || start_lead_h >= spec.length_hours) {
    throw DomainError("windowed_instances: start lead outside [0, window)");
  }
  if (fc.site_id() != labels.site_id()) {
    throw SchemaError("windowed_instances: forecast site " + fc.site_id() +
                      " does not match labels site " + labels.site_id());
  }
  WindowSpec effective = spec;
  effective.length_hours = spec.length_hours - start_lead_h;

  WindowedInstances out;
  std::vector<double> probs;
  for (const HourStamp issue : fc.issue_times()) {
    probs.clear();
    bool complete = true;
    for (int lead = start_lead_h; lead < spec.length_hours; ++lead) {
      const std::optional<double> p = fc.at(issue, issue + lead);
      if (!p) {
        complete = false;
        break;
      }
      probs.push_back(*p);
    }
    if (!complete) {
      ++out.n_dropped;
      continue;
    }
    const std::optional<int> outcome =
        window_any(labels, issue + start_lead_h, effective);
    if (!outcome) {
      ++out.n_dropped;
      continue;
    }
    out.instances.push_back({issue, window_prob(probs), *outcome});
  }
  return out;
}

}  // namespace gridwx
