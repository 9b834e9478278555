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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vizforge/database.hpp"
#include "vizforge/predicate.hpp"

namespace vizforge {

/// Semantic chart types. The surface language has four mark tokens; the grouped
/// and stacked variants are the bar/line/point marks with a color channel.
enum class ChartType { kBar, kPie, kLine, kScatter, kStackedBar, kGroupedLine, kGroupedScatter };

inline constexpr ChartType kAllChartTypes[] = {
    ChartType::kBar,        ChartType::kPie,          ChartType::kLine,
    ChartType::kScatter,    ChartType::kStackedBar,   ChartType::kGroupedLine,
    ChartType::kGroupedScatter};

std::string_view chart_type_name(ChartType ct);
std::optional<ChartType> parse_chart_type(std::string_view name);
/// Surface mark token: bar, pie, line or point.
std::string_view mark_token(ChartType ct);
bool has_color_channel(ChartType ct);
ChartType with_color(ChartType base);  // bar -> stacked_bar, line -> grouped_line, ...
ChartType without_color(ChartType ct);

enum class TimeUnit { kYear, kMonth, kDay, kWeekday };

std::string_view time_unit_name(TimeUnit unit);
std::optional<TimeUnit> parse_time_unit(std::string_view name);

struct YEncoding {
  AggFn aggregate = AggFn::kNone;
  ColumnRef column;  // `*` only with count

  bool operator==(const YEncoding&) const = default;
};

/// `join <table> on <left> = <right>` attached to the data clause.
struct VisJoin {
  std::string table;
  ColumnRef left;
  ColumnRef right;

  bool operator==(const VisJoin&) const = default;
};

struct VisSort {
  enum class Target { kX, kY };
  Target target = Target::kX;
  SortDirection direction = SortDirection::kAsc;

  bool operator==(const VisSort&) const = default;
};

/// Abstract Vega-Zero query. Identifiers are stored lowercase; literals keep their case.
struct VisQuery {
  ChartType mark = ChartType::kBar;
  std::optional<std::string> data;
  std::vector<VisJoin> joins;
  ColumnRef x;
  YEncoding y;
  std::optional<ColumnRef> color;
  std::optional<Predicate> filter;
  bool group_x = false;
  std::optional<TimeUnit> bin;  // always bins x
  std::optional<VisSort> sort;
  std::optional<std::int64_t> topk;

  bool operator==(const VisQuery&) const = default;
};

/// Throws InvariantViolation when a structural rule does not hold.
void check_vis_invariants(const VisQuery& v);

/// Throws SyntaxError or InvariantViolation.
VisQuery parse_vega_zero(std::string_view text);

std::string serialize_vega_zero(const VisQuery& v);

struct Violation {
  enum class Kind {
    kUnknownTable,
    kUnknownColumn,
    kAmbiguousData,
    kAmbiguousColumn,
    kRoleViolation,
    kLiteralMismatch,
    kBadJoin,
  };
  Kind kind;
  std::string subject;  // the offending table, column or channel
  std::string message;

  /// e.g. `UnknownColumn(dates)`.
  std::string to_string() const;
  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate(const VisQuery& v, const Database& db);

/// Table the query binds to: `data` if present, else the database's only table.
const Table* bound_table(const VisQuery& v, const Database& db);

}  // namespace vizforge
