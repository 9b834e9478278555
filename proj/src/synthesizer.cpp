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

#include "vizforge/synthesizer.hpp"

#include <algorithm>

#include "vizforge/error.hpp"

namespace vizforge {

Edit Edit::remove(std::string branch) {
  Edit e;
  e.kind = Kind::kDeleteBranch;
  e.branch = std::move(branch);
  return e;
}

Edit Edit::insert_mark(ChartType ct) {
  Edit e;
  e.kind = Kind::kInsertMark;
  e.mark = ct;
  return e;
}

Edit Edit::insert_bin(TimeUnit unit) {
  Edit e;
  e.kind = Kind::kInsertBin;
  e.unit = unit;
  return e;
}

Edit Edit::insert_group() {
  Edit e;
  e.kind = Kind::kInsertGroup;
  return e;
}

Edit Edit::insert_count() {
  Edit e;
  e.kind = Kind::kInsertAggregate;
  return e;
}

Edit Edit::encode(Encoding enc) {
  Edit e;
  e.kind = Kind::kEncode;
  e.encoding = enc;
  return e;
}

std::string Edit::to_string() const {
  switch (kind) {
    case Kind::kDeleteBranch:
      return "delete(" + branch + ")";
    case Kind::kInsertMark:
      return "mark(" + std::string(chart_type_name(mark)) + ")";
    case Kind::kInsertBin:
      return "bin(" + std::string(time_unit_name(unit)) + ")";
    case Kind::kInsertGroup:
      return "group";
    case Kind::kInsertAggregate:
      return "aggregate(count(*))";
    case Kind::kEncode: {
      std::string out = "encode(x=" + std::to_string(encoding.x) + ",y=" + std::to_string(encoding.y);
      if (encoding.color) out += ",color=" + std::to_string(*encoding.color);
      return out + ")";
    }
  }
  return {};
}

namespace {

std::string_view inside(std::string_view text, std::string_view head) {
  if (!text.starts_with(head) || !text.ends_with(")")) return {};
  return text.substr(head.size(), text.size() - head.size() - 1);
}

std::size_t parse_index(std::string_view text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string_view::npos)
    throw InvariantViolation("bad edit index '" + std::string(text) + "'");
  return std::stoul(std::string(text));
}

}  // namespace

Edit Edit::parse(std::string_view text) {
  if (text == "group") return insert_group();
  if (text == "aggregate(count(*))") return insert_count();
  if (auto b = inside(text, "delete("); !b.empty()) return remove(std::string(b));
  if (auto m = inside(text, "mark("); !m.empty()) {
    if (auto ct = parse_chart_type(m)) return insert_mark(*ct);
  }
  if (auto u = inside(text, "bin("); !u.empty()) {
    if (auto unit = parse_time_unit(u)) return insert_bin(*unit);
  }
  if (auto body = inside(text, "encode("); !body.empty()) {
    Encoding enc;
    std::size_t seen = 0;
    std::string_view rest = body;
    while (!rest.empty()) {
      auto comma = rest.find(',');
      std::string_view part = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view() : rest.substr(comma + 1);
      if (part.starts_with("x=")) {
        enc.x = parse_index(part.substr(2));
        seen |= 1;
      } else if (part.starts_with("y=")) {
        enc.y = parse_index(part.substr(2));
        seen |= 2;
      } else if (part.starts_with("color=")) {
        enc.color = parse_index(part.substr(6));
      } else {
        seen = 0;
        break;
      }
    }
    if (seen == 3) return encode(enc);
  }
  throw InvariantViolation("unknown edit '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// SqlQuery -> DataTree

namespace {

/// Position of the later of the two tables a join condition links.
std::size_t join_owner(const std::vector<std::string>& tables, const JoinCondition& j) {
  std::size_t owner = 0;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (iequals(j.left.table, tables[i]) || iequals(j.right.table, tables[i])) owner = i;
  }
  return owner;
}

class Resolver {
 public:
  Resolver(const Database& db, const std::vector<std::string>& tables) {
    for (const auto& name : tables) {
      const Table* t = db.find_table(name);
      if (!t) throw UnknownIdentifier(name);
      tables_.push_back(t);
    }
  }

  const std::vector<const Table*>& tables() const { return tables_; }

  /// Canonical casing, keeping the qualifier only when the source had one.
  std::pair<ColumnRef, Role> resolve(const ColumnRef& ref) const {
    if (ref.is_star()) return {ref, Role::kQuantitative};
    const Table* owner = nullptr;
    std::size_t col = 0;
    for (const Table* t : tables_) {
      if (ref.qualified() && !iequals(ref.table, t->name())) continue;
      if (auto idx = t->find_column(ref.column)) {
        if (owner) throw UnknownIdentifier(ref.to_string() + " (ambiguous)");
        owner = t;
        col = *idx;
      }
    }
    if (!owner) throw UnknownIdentifier(ref.to_string());
    ColumnRef out{ref.qualified() ? owner->name() : "", owner->columns()[col].name};
    return {out, owner->columns()[col].role};
  }

  const Table* owner(const ColumnRef& ref) const {
    for (const Table* t : tables_) {
      if (ref.qualified() && !iequals(ref.table, t->name())) continue;
      if (t->find_column(ref.column)) return t;
    }
    return nullptr;
  }

 private:
  std::vector<const Table*> tables_;
};

Value coerce_literal(const Comparison& atom, Role role) {
  const Value& lit = atom.literal;
  if (atom.op == CompareOp::kLike) {
    if (role != Role::kCategorical) throw UnsupportedSql("LIKE on a non-text column");
    return lit;
  }
  switch (role) {
    case Role::kQuantitative:
      if (lit.is_number()) return lit;
      if (auto n = parse_number(lit.text())) return Value(*n);
      break;
    case Role::kCategorical:
      if (lit.is_text()) return lit;
      return Value(format_number(lit.number()));
    case Role::kTemporal: {
      std::string text = lit.is_text() ? lit.text() : format_number(lit.number());
      if (parse_date(text)) return Value(text);
      break;
    }
  }
  throw UnsupportedSql("literal " + render_literal(lit) + " compared with a " +
                       std::string(role_name(role)) + " column");
}

}  // namespace

DataTree sql_to_data_tree(const SqlQuery& q, const Database& db) {
  check_sql_invariants(q);
  if (q.select_items.size() > 3) throw TooManyColumns(q.select_items.size());
  DataTree t;
  Resolver resolver(db, q.from_tables);
  for (const Table* table : resolver.tables()) t.tables.push_back(table->name());
  for (const auto& item : q.select_items)
    t.select.push_back({item.agg, resolver.resolve(item.column).first});
  for (const auto& j : q.joins)
    t.join.push_back({resolver.resolve(j.left).first, resolver.resolve(j.right).first});
  for (std::size_t i = 1; i < t.tables.size(); ++i) {
    auto links = std::count_if(t.join.begin(), t.join.end(),
                               [&](const JoinCondition& j) { return join_owner(t.tables, j) == i; });
    if (links > 1) throw UnsupportedSql("join on several conditions");
  }
  if (q.where_clause) {
    Predicate p;
    for (const auto& atom : q.where_clause->atoms) {
      auto [ref, role] = resolver.resolve(atom.column);
      p.atoms.push_back({ref, atom.op, coerce_literal(atom, role)});
    }
    t.filter = std::move(p);
  }
  for (const auto& g : q.group_by) t.group.push_back(resolver.resolve(g).first);
  t.sort = q.order_by;
  t.limit = q.limit;
  return t;
}

// ---------------------------------------------------------------------------
// Edits

DataTree apply_edit(DataTree t, const Edit& edit) {
  auto fail = [&](const std::string& why) {
    throw InvariantViolation("edit " + edit.to_string() + ": " + why);
  };
  switch (edit.kind) {
    case Edit::Kind::kDeleteBranch: {
      if (edit.branch == "sort") {
        if (!t.sort) fail("no sort branch");
        if (t.encoding && t.limit) fail("delete the limit first");
        t.sort.reset();
      } else if (edit.branch == "limit") {
        if (!t.limit) fail("no limit branch");
        t.limit.reset();
      } else if (edit.branch == "filter") {
        if (!t.filter) fail("no filter branch");
        t.filter.reset();
      } else if (edit.branch == "group") {
        if (t.group.empty()) fail("no group branch");
        t.group.clear();
      } else if (edit.branch.starts_with("select:")) {
        std::size_t i = parse_index(std::string_view(edit.branch).substr(7));
        if (i >= t.select.size() || t.select.size() == 1) fail("no such select item");
        if (t.encoding) fail("the tree is already encoded");
        if (t.sort && t.sort->item == i) fail("the sort branch refers to this item");
        if (t.sort && t.sort->item > i) --t.sort->item;
        const SelectItem removed = t.select[i];
        t.select.erase(t.select.begin() + static_cast<std::ptrdiff_t>(i));
        if (removed.agg == AggFn::kNone) {
          std::erase_if(t.group, [&](const ColumnRef& g) { return same_column(g, removed.column); });
        }
      } else {
        fail("unknown branch");
      }
      break;
    }
    case Edit::Kind::kInsertMark:
      if (t.mark) fail("mark already set");
      t.mark = edit.mark;
      break;
    case Edit::Kind::kInsertBin:
      if (t.bin) fail("bin already set");
      t.bin = edit.unit;
      break;
    case Edit::Kind::kInsertGroup:
      if (!t.group.empty()) fail("group already set");
      if (!t.encoding) fail("the tree is not encoded");
      t.group.push_back(t.select[t.encoding->x].column);
      if (t.encoding->color) t.group.push_back(t.select[*t.encoding->color].column);
      break;
    case Edit::Kind::kInsertAggregate:
      if (t.encoding) fail("the tree is already encoded");
      t.select.push_back({AggFn::kCount, {"", "*"}});
      break;
    case Edit::Kind::kEncode: {
      if (t.encoding) fail("already encoded");
      const Encoding& e = edit.encoding;
      std::size_t n = t.select.size();
      if (e.x >= n || e.y >= n || e.x == e.y) fail("bad x/y");
      if (e.color && (*e.color >= n || *e.color == e.x || *e.color == e.y)) fail("bad color");
      std::size_t used = e.color ? 3 : 2;
      if (used != n) fail("every select item must be encoded");
      t.encoding = e;
      break;
    }
  }
  return t;
}

DataTree apply_edits(DataTree t, const std::vector<Edit>& edits) {
  for (const auto& e : edits) t = apply_edit(std::move(t), e);
  return t;
}

namespace {

ColumnRef lowered(const ColumnRef& r) { return {to_lower(r.table), to_lower(r.column)}; }

}  // namespace

VisQuery tree_to_vis(const DataTree& t) {
  if (!t.mark || !t.encoding) throw InvariantViolation("tree has no mark or encoding");
  if (t.tables.empty()) throw InvariantViolation("tree has no table");
  const Encoding& e = *t.encoding;
  VisQuery v;
  v.mark = *t.mark;
  v.data = to_lower(t.tables.front());
  for (std::size_t i = 1; i < t.tables.size(); ++i) {
    const JoinCondition* cond = nullptr;
    for (const auto& j : t.join) {
      if (join_owner(t.tables, j) != i) continue;
      if (cond) throw UnsupportedSql("join on several conditions");
      cond = &j;
    }
    if (!cond) throw InvariantViolation("table '" + t.tables[i] + "' has no join condition");
    v.joins.push_back({to_lower(t.tables[i]), lowered(cond->left), lowered(cond->right)});
  }
  const SelectItem& x = t.select[e.x];
  const SelectItem& y = t.select[e.y];
  if (x.agg != AggFn::kNone) throw InvariantViolation("x must be a plain column");
  v.x = lowered(x.column);
  v.y = {y.agg, lowered(y.column)};
  if (e.color) v.color = lowered(t.select[*e.color].column);
  if (t.filter) {
    Predicate p;
    for (const auto& a : t.filter->atoms) p.atoms.push_back({lowered(a.column), a.op, a.literal});
    v.filter = std::move(p);
  }
  v.group_x = !t.group.empty();
  v.bin = t.bin;
  if (t.sort) {
    VisSort s;
    if (t.sort->item == e.x) {
      s.target = VisSort::Target::kX;
    } else if (t.sort->item == e.y) {
      s.target = VisSort::Target::kY;
    } else {
      throw InvariantViolation("sort refers to an item that is neither x nor y");
    }
    s.direction = t.sort->direction;
    v.sort = s;
    v.topk = t.limit;
  } else if (t.limit) {
    throw InvariantViolation("limit without sort");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

struct Arrangement {
  std::vector<Edit> edits;  // projection / count injection edits, then encode
  DataTree tree;            // tree after `edits`
};

std::optional<Role> item_role(const DataTree& t, const Resolver& r, std::size_t i) {
  const SelectItem& item = t.select[i];
  if (item.column.is_star()) return std::nullopt;
  return r.resolve(item.column).second;
}

bool plain(const DataTree& t, std::size_t i) {
  return t.select[i].agg == AggFn::kNone && !t.select[i].column.is_star();
}

bool usable_y(const DataTree& t, const Resolver& r, std::size_t i) {
  const SelectItem& item = t.select[i];
  if (item.agg == AggFn::kCount) return true;
  return item_role(t, r, i) == Role::kQuantitative;
}

bool encodable(const DataTree& t, const Resolver& r, const Encoding& e) {
  if (!plain(t, e.x) || !usable_y(t, r, e.y)) return false;
  if (e.color && (!plain(t, *e.color) || item_role(t, r, *e.color) != Role::kCategorical))
    return false;
  return true;
}

/// Encodings that use every select item, from a tree with no encoding yet.
std::vector<Arrangement> full_arrangements(const DataTree& t, const Resolver& r,
                                           std::vector<Edit> prefix) {
  std::vector<Arrangement> out;
  std::size_t n = t.select.size();
  auto add = [&](const DataTree& base, std::vector<Edit> edits, Encoding e) {
    if (!encodable(base, r, e)) return;
    edits.push_back(Edit::encode(e));
    out.push_back({edits, apply_edit(base, edits.back())});
  };
  if (n == 1) {
    if (plain(t, 0) && item_role(t, r, 0) == Role::kCategorical) {
      std::vector<Edit> edits = prefix;
      edits.push_back(Edit::insert_count());
      add(apply_edit(t, edits.back()), edits, {0, 1, std::nullopt});
    }
  } else if (n == 2) {
    add(t, prefix, {0, 1, std::nullopt});
    add(t, prefix, {1, 0, std::nullopt});
  } else if (n == 3) {
    static constexpr std::size_t kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : kPerms) add(t, prefix, {p[0], p[1], p[2]});
  }
  return out;
}

std::vector<Arrangement> arrangements(const DataTree& t, const Resolver& r) {
  auto out = full_arrangements(t, r, {});
  if (!out.empty() || t.select.size() < 2) return out;
  // No encoding carries every column: fall back to projections.
  for (std::size_t i = 0; i < t.select.size(); ++i) {
    std::vector<Edit> edits;
    DataTree base = t;
    if (base.sort && base.sort->item == i) {
      if (base.limit) {
        edits.push_back(Edit::remove("limit"));
        base = apply_edit(base, edits.back());
      }
      edits.push_back(Edit::remove("sort"));
      base = apply_edit(base, edits.back());
    }
    edits.push_back(Edit::remove("select:" + std::to_string(i)));
    base = apply_edit(base, edits.back());
    auto more = full_arrangements(base, r, edits);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

bool nonnegative(const Resolver& r, const ColumnRef& column) {
  const Table* owner = r.owner(column);
  if (!owner) return false;
  auto stats = column_stats(*owner, column.column);
  return !stats.min_value || !stats.min_value->is_number() || stats.min_value->number() >= 0;
}

/// Mapping-rule table, in emission order.
std::vector<ChartType> admissible(Role x_role, const SelectItem& y, bool has_color, bool pie_ok) {
  std::vector<ChartType> base;
  bool aggregated = y.agg != AggFn::kNone;
  switch (x_role) {
    case Role::kCategorical:
      base.push_back(ChartType::kBar);
      if (aggregated && pie_ok) base.push_back(ChartType::kPie);
      break;
    case Role::kTemporal:
      if (aggregated) base.push_back(ChartType::kBar);
      base.push_back(ChartType::kLine);
      break;
    case Role::kQuantitative:
      if (!aggregated) base.push_back(ChartType::kScatter);
      break;
  }
  if (!has_color) return base;
  std::vector<ChartType> colored;
  for (ChartType ct : base) {
    if (ct != ChartType::kPie) colored.push_back(with_color(ct));
  }
  return colored;
}

}  // namespace

std::vector<Derivation> derive_charts(const DataTree& t, const Database& db, const SynthesisOptions& options) {
  if (t.mark || t.encoding) throw InvariantViolation("derive_charts expects an unencoded tree");
  Resolver resolver(db, t.tables);
  std::vector<Derivation> out;
  auto emit = [&](const DataTree& tree, const std::vector<Edit>& edits) {
    for (const auto& d : out) {
      if (d.tree == tree) return;
    }
    VisQuery v;
    try {
      v = tree_to_vis(tree);
    } catch (const InvariantViolation&) {
      return;
    }
    if (!validate(v, db).empty()) return;
    out.push_back({tree, edits});
  };

  for (const auto& arr : arrangements(t, resolver)) {
    const Encoding& e = *arr.tree.encoding;
    const SelectItem& y = arr.tree.select[e.y];
    auto x_role = item_role(arr.tree, resolver, e.x);
    if (!x_role) continue;

    std::vector<Edit> edits = arr.edits;
    DataTree tree = arr.tree;
    auto push = [&](Edit edit) {
      tree = apply_edit(tree, edit);
      edits.push_back(std::move(edit));
    };
    bool aggregated = y.agg != AggFn::kNone;
    if (!aggregated && !tree.group.empty()) push(Edit::remove("group"));
    if (aggregated && tree.group.empty()) push(Edit::insert_group());
    if (tree.sort && tree.sort->item != e.x && tree.sort->item != e.y) {
      if (tree.limit) push(Edit::remove("limit"));
      push(Edit::remove("sort"));
    }
    if (tree.limit && !tree.sort) push(Edit::remove("limit"));

    bool pie_ok = y.agg == AggFn::kCount ||
                  (y.agg == AggFn::kSum && nonnegative(resolver, y.column));
    for (ChartType ct : admissible(*x_role, y, e.color.has_value(), pie_ok)) {
      std::vector<Edit> base_edits = edits;
      base_edits.push_back(Edit::insert_mark(ct));
      DataTree base = apply_edit(tree, base_edits.back());
      emit(base, base_edits);

      if (base.sort) {
        std::vector<Edit> ed = base_edits;
        DataTree variant = base;
        if (variant.limit) {
          ed.push_back(Edit::remove("limit"));
          variant = apply_edit(variant, ed.back());
        }
        ed.push_back(Edit::remove("sort"));
        emit(apply_edit(variant, ed.back()), ed);
      }
      if (base.filter) {
        std::vector<Edit> ed = base_edits;
        ed.push_back(Edit::remove("filter"));
        emit(apply_edit(base, ed.back()), ed);
      }
      if (*x_role == Role::kTemporal && aggregated) {
        for (TimeUnit unit : options.bin_units) {
          std::vector<Edit> ed = base_edits;
          ed.push_back(Edit::insert_bin(unit));
          emit(apply_edit(base, ed.back()), ed);
        }
      }
    }
  }
  return out;
}

std::vector<DataTree> enumerate_edits(const DataTree& t, const Database& db, const SynthesisOptions& options) {
  std::vector<DataTree> out;
  for (auto& d : derive_charts(t, db, options)) out.push_back(std::move(d.tree));
  return out;
}

std::vector<ChartCandidate> synthesize_vis(const SqlQuery& q, const Database& db,
                                           const SynthesisOptions& options) {
  DataTree tree = sql_to_data_tree(q, db);
  std::vector<ChartCandidate> out;
  for (auto& d : derive_charts(tree, db, options)) {
    ChartCandidate c;
    c.vis = tree_to_vis(d.tree);
    c.tree = std::move(d.tree);
    c.edits = std::move(d.edits);
    c.source = q;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace vizforge
