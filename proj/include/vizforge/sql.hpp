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

#include "vizforge/predicate.hpp"

namespace vizforge {

/// A plain column reference (agg == kNone) or an aggregate over a column or `*`.
struct SelectItem {
  AggFn agg = AggFn::kNone;
  ColumnRef column;

  bool operator==(const SelectItem&) const = default;
};

/// Inner equi-join condition `left = right`.
struct JoinCondition {
  ColumnRef left;
  ColumnRef right;

  bool operator==(const JoinCondition&) const = default;
};

struct OrderBy {
  std::size_t item = 0;  // index into select_items
  SortDirection direction = SortDirection::kAsc;

  bool operator==(const OrderBy&) const = default;
};

/// AST for the supported subset: one SELECT with inner equi-joins, an AND-only
/// WHERE, GROUP BY, one ORDER BY target and LIMIT.
///
/// Table aliases are resolved while parsing, so every qualifier names a table in
/// `from_tables`. Join conditions are stored grouped by the table they attach, in
/// `from_tables` order; each condition references that table.
struct SqlQuery {
  std::vector<SelectItem> select_items;
  std::vector<std::string> from_tables;
  std::vector<JoinCondition> joins;
  std::optional<Predicate> where_clause;
  std::vector<ColumnRef> group_by;
  std::optional<OrderBy> order_by;
  std::optional<std::int64_t> limit;

  bool operator==(const SqlQuery&) const = default;
};

/// Throws SyntaxError or UnsupportedSql (naming the construct).
SqlQuery parse_sql(std::string_view text);

/// Canonical single-line rendering; parse_sql() reads it back to an equal AST.
std::string serialize_sql(const SqlQuery& query);

/// Throws InvariantViolation if the AST breaks a structural rule.
void check_sql_invariants(const SqlQuery& query);

}  // namespace vizforge
