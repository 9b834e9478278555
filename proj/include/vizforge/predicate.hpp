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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vizforge/value.hpp"

namespace vizforge {

enum class AggFn { kNone, kCount, kSum, kAvg, kMin, kMax };

/// Lowercase keyword: none, count, sum, avg, min, max.
std::string_view agg_name(AggFn fn);
std::optional<AggFn> parse_agg(std::string_view text);

enum class SortDirection { kAsc, kDesc };

/// A possibly table-qualified column name. `column == "*"` denotes count(*).
struct ColumnRef {
  std::string table;
  std::string column;

  bool is_star() const { return column == "*"; }
  bool qualified() const { return !table.empty(); }
  std::string to_string() const { return table.empty() ? column : table + "." + column; }

  /// Splits `t.c` at the last dot; no dot means unqualified.
  static ColumnRef parse(std::string_view text);

  bool operator==(const ColumnRef&) const = default;
};

/// Case-insensitive match where an unqualified side matches any qualifier.
bool same_column(const ColumnRef& a, const ColumnRef& b);

enum class CompareOp { kEq, kNe, kLt, kLe, kGt, kGe, kLike };

std::string_view compare_op_symbol(CompareOp op);

struct Comparison {
  ColumnRef column;
  CompareOp op = CompareOp::kEq;
  Value literal;  // text or number

  bool operator==(const Comparison&) const = default;
};

/// Conjunction of atomic comparisons.
struct Predicate {
  std::vector<Comparison> atoms;

  bool operator==(const Predicate&) const = default;
};

/// SQL-style quoted text literal with '' escaping.
std::string quote_literal(std::string_view text);
std::string render_literal(const Value& literal);

}  // namespace vizforge
