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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vizforge/database.hpp"
#include "vizforge/predicate.hpp"
#include "vizforge/sql.hpp"
#include "vizforge/vega_zero.hpp"

namespace vizforge {

/// Rendered rows of a VisQuery: x, y and (when present) color, in that order.
///
/// Rows are ordered by the sort clause if there is one, otherwise by x ascending
/// with color as tiebreak; nulls sort last in either direction and remaining ties
/// keep input order. Binned x values become text labels (role categorical).
struct ResultTable {
  std::vector<Column> columns;
  std::vector<Row> rows;

  bool operator==(const ResultTable&) const = default;
};

/// Runs join, filter, bin, group/aggregate, sort and topk in that order.
///
/// Expects validate(v, db) to be empty; throws ExecutionError otherwise.
ResultTable execute(const VisQuery& v, const Database& db);

/// AND over the atoms. Comparisons against null are false; LIKE matches `%` and
/// `_` wildcards, ignoring ASCII case as SQLite does.
bool eval_predicate(const Table& table, const Row& row, const Predicate& p);

bool like_match(std::string_view text, std::string_view pattern);

/// Inner equi-join, associating left to right. Output columns are the inputs'
/// columns in order, renamed `table.column` when a name occurs in more than one
/// input. Throws DisconnectedJoin when a table has no condition linking it to
/// the tables before it.
Table inner_join(const Database& db, std::span<const std::string> tables,
                 std::span<const JoinCondition> conditions);

/// One row per distinct key combination (null is its own group), ordered by
/// key. The aggregate column is named like `sum(col)` or `count(*)`.
Table group_aggregate(const Table& table, std::span<const std::string> keys, AggFn agg,
                      std::string_view value_col);

/// year -> "YYYY", month -> "YYYY-MM", day -> "YYYY-MM-DD", weekday -> "Mon".."Sun".
std::string bin_label(const Date& date, TimeUnit unit);
std::vector<std::string> bin_temporal(std::span<const Date> dates, TimeUnit unit);

/// Position of a weekday label in ISO order (Mon = 1), 0 if it is not one.
int weekday_rank(std::string_view label);

std::string result_to_csv(const ResultTable& result);

/// Name of the y column in a ResultTable: the column itself, or `fn(col)`.
std::string y_column_name(const YEncoding& y);

}  // namespace vizforge
