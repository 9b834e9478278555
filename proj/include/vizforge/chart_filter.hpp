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

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vizforge/database.hpp"
#include "vizforge/engine.hpp"
#include "vizforge/vega_zero.hpp"

namespace vizforge {

/// Readability features of a rendered chart, taken from the executed result.
struct VisFeatures {
  std::size_t n_distinct_x = 0;
  std::size_t n_tuples_rendered = 0;
  double unique_ratio_x = 0;  // n_distinct_x / n_tuples_rendered, 0 when empty
  std::optional<double> y_min;
  std::optional<double> y_max;
  Role x_role = Role::kCategorical;
  std::optional<double> correlation_xy;  // only when x is quantitative
  ChartType chart = ChartType::kBar;
  std::size_t n_series = 1;  // distinct color values, 1 without color

  bool operator==(const VisFeatures&) const = default;
};

struct Reason {
  std::string rule;  // e.g. `too_many_bars`
  std::string text;

  bool operator==(const Reason&) const = default;
};

/// Good iff no rule fired.
struct Judgment {
  std::vector<Reason> reasons;

  bool good() const { return reasons.empty(); }
  bool has(std::string_view rule) const;
};

struct FilterThresholds {
  std::size_t too_many_bars = 50;
  std::size_t too_many_slices = 20;
  std::size_t too_many_series = 12;
  std::size_t overplotted_scatter = 10000;

  /// Overrides from `rule -> threshold` pairs; unknown keys and non-integers throw ConfigError.
  static FilterThresholds from_config(const std::map<std::string, std::string>& entries);
};

/// Rule identifiers in the order judge() applies them.
const std::vector<std::string>& filter_rules();

VisFeatures extract_features(const ResultTable& result, ChartType chart);
VisFeatures extract_features(const VisQuery& v, const Database& db);

Judgment judge(const VisFeatures& f, const FilterThresholds& limits = {});

}  // namespace vizforge
