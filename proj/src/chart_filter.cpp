/*
 * Copyright 2026 The vizforge Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "vizforge/chart_filter.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "vizforge/error.hpp"

namespace vizforge {
namespace {

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const { return compare_values(a, b) < 0; }
};

std::size_t parse_threshold(const std::string& key, const std::string& text) {
  std::size_t value = 0;
  auto t = trim(text);
  auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || end != t.data() + t.size() || t.empty()) {
    throw ConfigError("threshold '" + key + "' is not a non-negative integer: " + text);
  }
  return value;
}

bool is_scatter(ChartType ct) {
  return ct == ChartType::kScatter || ct == ChartType::kGroupedScatter;
}

}  // namespace

bool Judgment::has(std::string_view rule) const {
  return std::any_of(reasons.begin(), reasons.end(), [&](const Reason& r) { return r.rule == rule; });
}

FilterThresholds FilterThresholds::from_config(const std::map<std::string, std::string>& entries) {
  FilterThresholds t;
  for (const auto& [key, value] : entries) {
    if (key == "too_many_bars") {
      t.too_many_bars = parse_threshold(key, value);
    } else if (key == "too_many_slices") {
      t.too_many_slices = parse_threshold(key, value);
    } else if (key == "too_many_series") {
      t.too_many_series = parse_threshold(key, value);
    } else if (key == "overplotted_scatter") {
      t.overplotted_scatter = parse_threshold(key, value);
    } else {
      throw ConfigError("unknown filter threshold '" + key + "'");
    }
  }
  return t;
}

const std::vector<std::string>& filter_rules() {
  static const std::vector<std::string> rules = {
      "too_many_bars",   "too_many_slices", "negative_pie",        "empty_result",
      "degenerate_axis", "too_many_series", "overplotted_scatter"};
  return rules;
}

VisFeatures extract_features(const ResultTable& result, ChartType chart) {
  VisFeatures f;
  f.chart = chart;
  if (!result.columns.empty()) f.x_role = result.columns[0].role;
  f.n_tuples_rendered = result.rows.size();

  std::set<Value, ValueLess> xs;
  std::set<Value, ValueLess> series;
  for (const auto& row : result.rows) {
    xs.insert(row[0]);
    if (row.size() > 2) series.insert(row[2]);
    const Value& y = row[1];
    if (!y.is_number()) continue;
    f.y_min = f.y_min ? std::min(*f.y_min, y.number()) : y.number();
    f.y_max = f.y_max ? std::max(*f.y_max, y.number()) : y.number();
  }
  f.n_distinct_x = xs.size();
  f.n_series = has_color_channel(chart) ? series.size() : 1;
  if (f.n_tuples_rendered > 0) {
    f.unique_ratio_x = static_cast<double>(f.n_distinct_x) / static_cast<double>(f.n_tuples_rendered);
  }
  if (f.x_role == Role::kQuantitative && result.columns.size() >= 2) {
    Table t("result", {{"x", Role::kQuantitative}, {"y", Role::kQuantitative}});
    for (const auto& row : result.rows) t.add_row({row[0], row[1]});
    f.correlation_xy = correlation(t, "x", "y");
  }
  return f;
}

VisFeatures extract_features(const VisQuery& v, const Database& db) {
  return extract_features(execute(v, db), v.mark);
}

Judgment judge(const VisFeatures& f, const FilterThresholds& limits) {
  Judgment j;
  auto fire = [&](std::string rule, std::string text) { j.reasons.push_back({std::move(rule), std::move(text)}); };
  const ChartType ct = f.chart;

  if ((ct == ChartType::kBar || ct == ChartType::kStackedBar) && f.n_distinct_x > limits.too_many_bars) {
    fire("too_many_bars", std::to_string(f.n_distinct_x) + " bars, more than " +
                              std::to_string(limits.too_many_bars));
  }
  if (ct == ChartType::kPie && f.n_distinct_x > limits.too_many_slices) {
    fire("too_many_slices", std::to_string(f.n_distinct_x) + " slices, more than " +
                                std::to_string(limits.too_many_slices));
  }
  if (ct == ChartType::kPie && f.y_min && *f.y_min < 0) {
    fire("negative_pie", "pie chart with a negative value (" + format_number(*f.y_min) + ")");
  }
  if (f.n_tuples_rendered == 0) fire("empty_result", "no rows to render");
  if ((ct == ChartType::kBar || ct == ChartType::kPie || ct == ChartType::kLine) && f.n_distinct_x == 1) {
    fire("degenerate_axis", "a single x value");
  }
  if (has_color_channel(ct) && f.n_series > limits.too_many_series) {
    fire("too_many_series", std::to_string(f.n_series) + " series, more than " +
                                std::to_string(limits.too_many_series));
  }
  if (is_scatter(ct) && f.n_tuples_rendered > limits.overplotted_scatter) {
    fire("overplotted_scatter", std::to_string(f.n_tuples_rendered) + " points, more than " +
                                    std::to_string(limits.overplotted_scatter));
  }
  return j;
}

}  // namespace vizforge
