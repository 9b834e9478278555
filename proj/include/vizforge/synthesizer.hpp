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
#include <vector>

#include "vizforge/database.hpp"
#include "vizforge/sql.hpp"
#include "vizforge/vega_zero.hpp"

namespace vizforge {

/// Which select items a chart encodes. Indices point into DataTree::select.
struct Encoding {
  std::size_t x = 0;
  std::size_t y = 0;
  std::optional<std::size_t> color;

  bool operator==(const Encoding&) const = default;
};

/// Tree form of a SqlQuery. Each member is one branch; `select` holds both the
/// select-columns and aggregation branches (an item's agg is its aggregation).
/// `encoding` and `mark` stay empty until edits fill them.
///
/// Column references are resolved against the database when the tree is built:
/// table names are the real names, and every unqualified column is unambiguous.
struct DataTree {
  std::vector<SelectItem> select;
  std::vector<std::string> tables;
  std::vector<JoinCondition> join;
  std::optional<Predicate> filter;
  std::vector<ColumnRef> group;
  std::optional<OrderBy> sort;
  std::optional<std::int64_t> limit;
  std::optional<TimeUnit> bin;
  std::optional<Encoding> encoding;
  std::optional<ChartType> mark;

  bool operator==(const DataTree&) const = default;
};

/// One tree edit. Deletable branches are `sort`, `limit`, `filter`, `group`
/// and `select:<i>`; deleting a select item renumbers the ones after it.
struct Edit {
  enum class Kind {
    kDeleteBranch,
    kInsertMark,
    kInsertBin,
    kInsertGroup,
    kInsertAggregate,  // appends `count(*)` to the select list
    kEncode,
  };
  Kind kind = Kind::kDeleteBranch;
  std::string branch;
  ChartType mark = ChartType::kBar;
  TimeUnit unit = TimeUnit::kYear;
  Encoding encoding;

  static Edit remove(std::string branch);
  static Edit insert_mark(ChartType ct);
  static Edit insert_bin(TimeUnit unit);
  static Edit insert_group();
  static Edit insert_count();
  static Edit encode(Encoding e);

  bool is_deletion() const { return kind == Kind::kDeleteBranch; }

  /// e.g. `delete(sort)`, `mark(pie)`, `bin(year)`, `group`, `aggregate(count(*))`,
  /// `encode(x=0,y=1,color=2)`.
  std::string to_string() const;
  static Edit parse(std::string_view text);

  bool operator==(const Edit&) const = default;
};

struct ChartCandidate {
  VisQuery vis;
  DataTree tree;
  std::vector<Edit> edits;
  SqlQuery source;
};

/// Throws UnknownIdentifier when a table or column does not resolve (or an
/// unqualified column matches several joined tables), TooManyColumns for more
/// than three select items, and UnsupportedSql for shapes no chart can carry
/// (e.g. a literal that does not fit its column's role).
DataTree sql_to_data_tree(const SqlQuery& q, const Database& db);

/// Throws InvariantViolation when the edit does not apply to the tree.
DataTree apply_edit(DataTree t, const Edit& edit);
DataTree apply_edits(DataTree t, const std::vector<Edit>& edits);

/// Throws InvariantViolation unless the tree has a mark and an encoding.
VisQuery tree_to_vis(const DataTree& t);

struct SynthesisOptions {
  /// Bins tried on a temporal x with an aggregated y, in order.
  std::vector<TimeUnit> bin_units = {TimeUnit::kYear, TimeUnit::kMonth, TimeUnit::kWeekday};
};

/// Completed trees derived from `t` (whose mark must be empty), each paired with
/// the edits that produce it from `t`.
struct Derivation {
  DataTree tree;
  std::vector<Edit> edits;
};
std::vector<Derivation> derive_charts(const DataTree& t, const Database& db,
                                      const SynthesisOptions& options = {});
std::vector<DataTree> enumerate_edits(const DataTree& t, const Database& db,
                                      const SynthesisOptions& options = {});

/// sql_to_data_tree followed by derive_charts; every returned vis validates.
std::vector<ChartCandidate> synthesize_vis(const SqlQuery& q, const Database& db,
                                           const SynthesisOptions& options = {});

}  // namespace vizforge
