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

#include "vizforge/engine.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <numeric>
#include <unordered_map>

#include "scope.hpp"
#include "vizforge/error.hpp"

namespace vizforge {

namespace {

std::optional<bool> compare_with_op(std::weak_ordering ord, CompareOp op) {
  switch (op) {
    case CompareOp::kEq:
      return ord == 0;
    case CompareOp::kNe:
      return ord != 0;
    case CompareOp::kLt:
      return ord < 0;
    case CompareOp::kLe:
      return ord <= 0;
    case CompareOp::kGt:
      return ord > 0;
    case CompareOp::kGe:
      return ord >= 0;
    case CompareOp::kLike:
      return std::nullopt;
  }
  return std::nullopt;
}

bool eval_atom(const Value& cell, const Comparison& atom) {
  if (cell.is_null() || atom.literal.is_null()) return false;
  if (atom.op == CompareOp::kLike) {
    return cell.is_text() && atom.literal.is_text() && like_match(cell.text(), atom.literal.text());
  }
  std::optional<Value> lit;
  if (cell.is_number() && atom.literal.is_number()) {
    lit = atom.literal;
  } else if (cell.is_text() && atom.literal.is_text()) {
    lit = atom.literal;
  } else if (cell.is_date() && atom.literal.is_text()) {
    if (auto d = parse_date(atom.literal.text())) lit = Value(*d);
  }
  if (!lit) return false;
  return compare_with_op(compare_values(cell, *lit), atom.op).value_or(false);
}

/// Hashable identity of a non-null value: kind tag plus canonical text.
std::string value_key(const Value& v) {
  return std::to_string(v.storage().index()) + ":" + v.to_string();
}

std::optional<std::size_t> find_table_column(const Table& table, const ColumnRef& ref) {
  if (auto idx = table.find_column(ref.to_string())) return idx;
  if (!ref.qualified() || iequals(ref.table, table.name())) return table.find_column(ref.column);
  return std::nullopt;
}

Value aggregate(AggFn fn, std::span<const Value* const> values, bool star) {
  if (fn == AggFn::kCount) {
    if (star) return Value(static_cast<double>(values.size()));
    double n = 0;
    for (const Value* v : values) n += v->is_null() ? 0 : 1;
    return Value(n);
  }
  std::vector<double> nums;
  for (const Value* v : values) {
    if (v->is_null()) continue;
    if (!v->is_number()) throw ExecutionError("aggregate over a non-numeric value");
    nums.push_back(v->number());
  }
  if (nums.empty()) return Value();
  switch (fn) {
    case AggFn::kSum:
      return Value(std::accumulate(nums.begin(), nums.end(), 0.0));
    case AggFn::kAvg:
      return Value(std::accumulate(nums.begin(), nums.end(), 0.0) / nums.size());
    case AggFn::kMin:
      return Value(*std::min_element(nums.begin(), nums.end()));
    case AggFn::kMax:
      return Value(*std::max_element(nums.begin(), nums.end()));
    default:
      throw ExecutionError("aggregate 'none' has no group value");
  }
}

std::string aggregate_column_name(AggFn fn, std::string_view column) {
  return std::string(agg_name(fn)) + "(" + std::string(column) + ")";
}

/// Joined relation over a scope: every column of every table, in scope order.
std::vector<Row> join_rows(const detail::Scope& scope, const VisQuery& v) {
  const auto& tables = scope.tables();
  std::vector<Row> rows;
  for (const auto& r : tables.front().table->rows()) rows.push_back(r);
  for (std::size_t t = 1; t < tables.size(); ++t) {
    const auto& j = v.joins[t - 1];
    std::size_t li = scope.require(j.left);
    std::size_t ri = scope.require(j.right);
    std::size_t begin = tables[t].offset;
    std::size_t end = begin + tables[t].table->columns().size();
    // `inner` is the column on the newly joined table, `outer` the one already in the rows
    std::size_t inner = (li >= begin && li < end) ? li : ri;
    std::size_t outer = inner == li ? ri : li;
    if (outer >= begin) throw ExecutionError("join condition does not reach an earlier table");
    std::unordered_map<std::string, std::vector<std::size_t>> index;
    const auto& right_rows = tables[t].table->rows();
    for (std::size_t r = 0; r < right_rows.size(); ++r) {
      const Value& key = right_rows[r][inner - begin];
      if (!key.is_null()) index[value_key(key)].push_back(r);
    }
    std::vector<Row> next;
    for (const auto& left : rows) {
      const Value& key = left[outer];
      if (key.is_null()) continue;
      auto it = index.find(value_key(key));
      if (it == index.end()) continue;
      for (std::size_t r : it->second) {
        Row combined = left;
        combined.insert(combined.end(), right_rows[r].begin(), right_rows[r].end());
        next.push_back(std::move(combined));
      }
    }
    rows = std::move(next);
  }
  return rows;
}

struct Rendered {
  Value x;
  Value x_order;  // sort key for x; differs from x for weekday labels
  Value y;
  Value color;
  std::size_t seq = 0;
};

}  // namespace

bool like_match(std::string_view text, std::string_view pattern) {
  auto eq = [](char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
  };
  std::size_t t = 0, p = 0;
  std::size_t star_p = std::string_view::npos, star_t = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '_' || (pattern[p] != '%' && eq(pattern[p], text[t])))) {
      ++t;
      ++p;
    } else if (p < pattern.size() && pattern[p] == '%') {
      star_p = p++;
      star_t = t;
    } else if (star_p != std::string_view::npos) {
      p = star_p + 1;
      t = ++star_t;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '%') ++p;
  return p == pattern.size();
}

bool eval_predicate(const Table& table, const Row& row, const Predicate& p) {
  for (const auto& atom : p.atoms) {
    auto idx = find_table_column(table, atom.column);
    if (!idx) throw UnknownColumn(atom.column.to_string());
    if (!eval_atom(row[*idx], atom)) return false;
  }
  return true;
}

std::string bin_label(const Date& date, TimeUnit unit) {
  static constexpr std::array<std::string_view, 7> kDays = {"Mon", "Tue", "Wed", "Thu",
                                                            "Fri", "Sat", "Sun"};
  std::string iso = date.iso();
  switch (unit) {
    case TimeUnit::kYear:
      return iso.substr(0, 4);
    case TimeUnit::kMonth:
      return iso.substr(0, 7);
    case TimeUnit::kDay:
      return iso;
    case TimeUnit::kWeekday:
      return std::string(kDays[date.iso_weekday() - 1]);
  }
  return iso;
}

std::vector<std::string> bin_temporal(std::span<const Date> dates, TimeUnit unit) {
  std::vector<std::string> out;
  out.reserve(dates.size());
  for (const auto& d : dates) out.push_back(bin_label(d, unit));
  return out;
}

int weekday_rank(std::string_view label) {
  static constexpr std::array<std::string_view, 7> kDays = {"Mon", "Tue", "Wed", "Thu",
                                                            "Fri", "Sat", "Sun"};
  for (std::size_t i = 0; i < kDays.size(); ++i) {
    if (kDays[i] == label) return static_cast<int>(i) + 1;
  }
  return 0;
}

std::string y_column_name(const YEncoding& y) {
  if (y.aggregate == AggFn::kNone) return to_lower(y.column.to_string());
  return aggregate_column_name(y.aggregate, to_lower(y.column.to_string()));
}

Table inner_join(const Database& db, std::span<const std::string> tables,
                 std::span<const JoinCondition> conditions) {
  if (tables.empty()) throw InvariantViolation("inner_join needs at least one table");
  std::vector<const Table*> inputs;
  for (const auto& name : tables) {
    const Table* t = db.find_table(name);
    if (!t) throw UnknownIdentifier(name);
    inputs.push_back(t);
  }
  detail::Scope scope(inputs);

  // Reuse the query path: each joined table takes the first condition linking it
  // to an earlier table; any further conditions become post-join filters.
  VisQuery shape;
  std::vector<std::pair<std::size_t, std::size_t>> extra;
  for (std::size_t t = 1; t < inputs.size(); ++t) {
    bool linked = false;
    for (const auto& c : conditions) {
      std::size_t li = 0, ri = 0;
      if (scope.find(c.left, &li) != detail::Scope::Lookup::kFound ||
          scope.find(c.right, &ri) != detail::Scope::Lookup::kFound)
        throw UnknownIdentifier(c.left.to_string() + " = " + c.right.to_string());
      auto lt = *scope.table_index(scope.columns()[li].table);
      auto rt = *scope.table_index(scope.columns()[ri].table);
      if (std::max(lt, rt) != t || lt == rt) continue;
      if (!linked) {
        shape.joins.push_back({inputs[t]->name(), c.left, c.right});
        linked = true;
      } else {
        extra.emplace_back(li, ri);
      }
    }
    if (!linked) throw DisconnectedJoin(inputs[t]->name());
  }
  auto rows = join_rows(scope, shape);
  if (!extra.empty()) {
    std::erase_if(rows, [&](const Row& r) {
      for (auto [a, b] : extra) {
        if (r[a].is_null() || r[b].is_null() || compare_values(r[a], r[b]) != 0) return true;
      }
      return false;
    });
  }

  std::vector<Column> columns;
  for (const auto& c : scope.columns()) {
    std::size_t uses = 0;
    for (const auto& other : scope.columns()) uses += iequals(other.name, c.name) ? 1 : 0;
    columns.push_back({uses > 1 ? c.table + "." + c.name : c.name, c.role});
  }
  std::string name = tables.front();
  for (std::size_t i = 1; i < tables.size(); ++i) name += "_" + tables[i];
  return Table(name, std::move(columns), std::move(rows));
}

Table group_aggregate(const Table& table, std::span<const std::string> keys, AggFn agg,
                      std::string_view value_col) {
  std::vector<std::size_t> key_idx;
  for (const auto& k : keys) key_idx.push_back(table.column_index(k));
  bool star = value_col == "*";
  std::size_t value_idx = 0;
  if (!star) {
    value_idx = table.column_index(value_col);
    if (agg != AggFn::kCount && table.columns()[value_idx].role != Role::kQuantitative)
      throw NotQuantitative(std::string(value_col));
  } else if (agg != AggFn::kCount) {
    throw InvariantViolation("'*' requires count");
  }
  if (agg == AggFn::kNone) throw InvariantViolation("group_aggregate needs an aggregate");

  std::unordered_map<std::string, std::size_t> group_of;
  std::vector<Row> group_keys;
  std::vector<std::vector<const Value*>> members;
  for (const auto& row : table.rows()) {
    Row key;
    std::string hash;
    for (std::size_t k : key_idx) {
      key.push_back(row[k]);
      hash += value_key(row[k]) + '\x1f';
    }
    auto [it, inserted] = group_of.emplace(hash, group_keys.size());
    if (inserted) {
      group_keys.push_back(std::move(key));
      members.emplace_back();
    }
    members[it->second].push_back(star ? &row[0] : &row[value_idx]);
  }
  std::vector<std::size_t> order(group_keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (std::size_t k = 0; k < key_idx.size(); ++k) {
      auto c = compare_values(group_keys[a][k], group_keys[b][k]);
      if (c != 0) return c < 0;
    }
    return false;
  });

  std::vector<Column> columns;
  for (std::size_t k : key_idx) columns.push_back(table.columns()[k]);
  columns.push_back({aggregate_column_name(agg, star ? "*" : table.columns()[value_idx].name),
                     Role::kQuantitative});
  std::vector<Row> rows;
  for (std::size_t g : order) {
    Row r = group_keys[g];
    r.push_back(aggregate(agg, members[g], star));
    rows.push_back(std::move(r));
  }
  return Table(table.name(), std::move(columns), std::move(rows));
}

ResultTable execute(const VisQuery& v, const Database& db) {
  if (!v.data && db.tables().size() != 1)
    throw ExecutionError("query has no data clause and the database has several tables");
  std::string missing;
  auto tables = detail::query_tables(v, db, &missing);
  if (tables.empty()) throw ExecutionError("unknown table '" + missing + "'");
  detail::Scope scope(tables);
  auto rows = join_rows(scope, v);

  if (v.filter) {
    std::vector<std::pair<std::size_t, const Comparison*>> atoms;
    for (const auto& a : v.filter->atoms) atoms.emplace_back(scope.require(a.column), &a);
    std::erase_if(rows, [&](const Row& r) {
      for (auto [idx, atom] : atoms) {
        if (!eval_atom(r[idx], *atom)) return true;
      }
      return false;
    });
  }

  std::size_t xi = scope.require(v.x);
  Role x_role = scope.columns()[xi].role;
  bool star = v.y.column.is_star();
  std::size_t yi = star ? 0 : scope.require(v.y.column);
  std::optional<std::size_t> ci;
  if (v.color) ci = scope.require(*v.color);
  if (v.bin && x_role != Role::kTemporal) throw ExecutionError("bin on a non-temporal column");
  if (!star && v.y.aggregate != AggFn::kCount &&
      scope.columns()[yi].role != Role::kQuantitative)
    throw ExecutionError("y is not quantitative");

  auto x_of = [&](const Row& r) {
    const Value& raw = r[xi];
    if (!v.bin || raw.is_null()) return raw;
    if (!raw.is_date()) throw ExecutionError("bin over a non-date value");
    return Value(bin_label(raw.date(), *v.bin));
  };
  auto x_order_of = [&](const Value& x) {
    if (v.bin == TimeUnit::kWeekday && x.is_text()) return Value(weekday_rank(x.text()));
    return x;
  };

  std::vector<Rendered> out;
  if (v.y.aggregate == AggFn::kNone) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Rendered r;
      r.x = x_of(rows[i]);
      r.x_order = x_order_of(r.x);
      r.y = rows[i][yi];
      if (ci) r.color = rows[i][*ci];
      r.seq = i;
      out.push_back(std::move(r));
    }
  } else {
    std::unordered_map<std::string, std::size_t> group_of;
    std::vector<std::vector<const Value*>> members;
    for (const auto& row : rows) {
      Value x = x_of(row);
      Value color = ci ? row[*ci] : Value();
      std::string key = value_key(x) + '\x1f' + value_key(color);
      auto [it, inserted] = group_of.emplace(key, out.size());
      if (inserted) {
        Rendered r;
        r.x_order = x_order_of(x);
        r.x = std::move(x);
        r.color = std::move(color);
        r.seq = out.size();
        out.push_back(std::move(r));
        members.emplace_back();
      }
      members[it->second].push_back(&row[yi]);
    }
    for (std::size_t g = 0; g < out.size(); ++g)
      out[g].y = aggregate(v.y.aggregate, members[g], star);
  }

  auto default_less = [](const Rendered& a, const Rendered& b) {
    auto c = compare_values(a.x_order, b.x_order);
    if (c != 0) return c < 0;
    c = compare_values(a.color, b.color);
    if (c != 0) return c < 0;
    return a.seq < b.seq;
  };
  if (v.sort) {
    bool desc = v.sort->direction == SortDirection::kDesc;
    bool on_x = v.sort->target == VisSort::Target::kX;
    std::sort(out.begin(), out.end(), [&](const Rendered& a, const Rendered& b) {
      const Value& ka = on_x ? a.x_order : a.y;
      const Value& kb = on_x ? b.x_order : b.y;
      if (ka.is_null() != kb.is_null()) return kb.is_null();
      auto c = compare_values(ka, kb);
      if (c != 0) return desc ? c > 0 : c < 0;
      return default_less(a, b);
    });
  } else {
    std::sort(out.begin(), out.end(), default_less);
  }
  if (v.topk && out.size() > static_cast<std::size_t>(*v.topk)) out.resize(*v.topk);

  ResultTable result;
  result.columns.push_back(
      {to_lower(v.x.to_string()), v.bin ? Role::kCategorical : x_role});
  result.columns.push_back({y_column_name(v.y), Role::kQuantitative});
  if (ci) result.columns.push_back({to_lower(v.color->to_string()), scope.columns()[*ci].role});
  result.rows.reserve(out.size());
  for (auto& r : out) {
    Row row{std::move(r.x), std::move(r.y)};
    if (ci) row.push_back(std::move(r.color));
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string result_to_csv(const ResultTable& result) {
  std::vector<std::string> fields;
  for (const auto& c : result.columns) fields.push_back(c.name);
  std::string out = csv::format_row(fields) + "\n";
  for (const auto& row : result.rows) {
    fields.clear();
    for (const auto& v : row) fields.push_back(v.to_string());
    out += csv::format_row(fields) + "\n";
  }
  return out;
}

}  // namespace vizforge
