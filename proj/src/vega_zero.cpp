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

#include "vizforge/vega_zero.hpp"

#include "lexer.hpp"
#include "scope.hpp"
#include "vizforge/error.hpp"

namespace vizforge {

std::string_view chart_type_name(ChartType ct) {
  switch (ct) {
    case ChartType::kBar:
      return "bar";
    case ChartType::kPie:
      return "pie";
    case ChartType::kLine:
      return "line";
    case ChartType::kScatter:
      return "scatter";
    case ChartType::kStackedBar:
      return "stacked_bar";
    case ChartType::kGroupedLine:
      return "grouped_line";
    case ChartType::kGroupedScatter:
      return "grouped_scatter";
  }
  return "bar";
}

std::optional<ChartType> parse_chart_type(std::string_view name) {
  for (ChartType ct : kAllChartTypes) {
    if (iequals(name, chart_type_name(ct))) return ct;
  }
  return std::nullopt;
}

std::string_view mark_token(ChartType ct) {
  switch (without_color(ct)) {
    case ChartType::kPie:
      return "pie";
    case ChartType::kLine:
      return "line";
    case ChartType::kScatter:
      return "point";
    default:
      return "bar";
  }
}

bool has_color_channel(ChartType ct) {
  return ct == ChartType::kStackedBar || ct == ChartType::kGroupedLine ||
         ct == ChartType::kGroupedScatter;
}

ChartType with_color(ChartType base) {
  switch (base) {
    case ChartType::kBar:
      return ChartType::kStackedBar;
    case ChartType::kLine:
      return ChartType::kGroupedLine;
    case ChartType::kScatter:
      return ChartType::kGroupedScatter;
    default:
      return base;
  }
}

ChartType without_color(ChartType ct) {
  switch (ct) {
    case ChartType::kStackedBar:
      return ChartType::kBar;
    case ChartType::kGroupedLine:
      return ChartType::kLine;
    case ChartType::kGroupedScatter:
      return ChartType::kScatter;
    default:
      return ct;
  }
}

std::string_view time_unit_name(TimeUnit unit) {
  switch (unit) {
    case TimeUnit::kYear:
      return "year";
    case TimeUnit::kMonth:
      return "month";
    case TimeUnit::kDay:
      return "day";
    case TimeUnit::kWeekday:
      return "weekday";
  }
  return "year";
}

std::optional<TimeUnit> parse_time_unit(std::string_view name) {
  for (TimeUnit u : {TimeUnit::kYear, TimeUnit::kMonth, TimeUnit::kDay, TimeUnit::kWeekday}) {
    if (iequals(name, time_unit_name(u))) return u;
  }
  return std::nullopt;
}

void check_vis_invariants(const VisQuery& v) {
  if (v.x.column.empty() || v.x.is_star()) throw InvariantViolation("x must name a column");
  if (v.y.column.column.empty()) throw InvariantViolation("y must name a column or *");
  if (v.y.column.is_star() && v.y.aggregate != AggFn::kCount)
    throw InvariantViolation("'*' on y requires aggregate count");
  if (has_color_channel(v.mark) != v.color.has_value())
    throw InvariantViolation(std::string(chart_type_name(v.mark)) +
                             (v.color ? " must not have a color channel"
                                      : " requires a color channel"));
  if (v.mark == ChartType::kPie && v.y.aggregate == AggFn::kNone)
    throw InvariantViolation("pie requires an aggregated y");
  if (v.topk && !v.sort) throw InvariantViolation("topk requires sort");
  if (v.topk && *v.topk <= 0) throw InvariantViolation("topk must be positive");
  if (v.y.aggregate == AggFn::kNone && v.group_x)
    throw InvariantViolation("group x requires an aggregated y");
  if (!v.joins.empty() && !v.data) throw InvariantViolation("join requires a data clause");
  if (v.filter && v.filter->atoms.empty()) throw InvariantViolation("empty filter");
}

// ---------------------------------------------------------------------------
// Parser

namespace {

using detail::Tok;
using detail::Token;

class VegaZeroParser {
 public:
  explicit VegaZeroParser(std::string_view text)
      : tokens_(detail::lex(text, detail::LexOptions{.dash_in_ident = true,
                                                      .dot_in_ident = true,
                                                      .backtick_opens_string = true})) {}

  VisQuery parse() {
    VisQuery v;
    expect_word("mark");
    const Token& m = peek();
    ChartType base;
    if (is_word(m, "bar")) {
      base = ChartType::kBar;
    } else if (is_word(m, "pie")) {
      base = ChartType::kPie;
    } else if (is_word(m, "line")) {
      base = ChartType::kLine;
    } else if (is_word(m, "point")) {
      base = ChartType::kScatter;
    } else {
      throw SyntaxError(m.pos, "mark type (bar, pie, line, point)", detail::describe(m));
    }
    advance();
    if (accept_word("data")) {
      v.data = identifier("table name");
      while (accept_word("join")) {
        VisJoin j;
        j.table = identifier("table name");
        expect_word("on");
        j.left = column_ref();
        expect_symbol("=");
        j.right = column_ref();
        v.joins.push_back(std::move(j));
      }
    }
    expect_word("encoding");
    expect_word("x");
    v.x = column_ref();
    expect_word("y");
    expect_word("aggregate");
    const Token& agg = peek();
    auto fn = agg.kind == Tok::kIdent ? parse_agg(agg.text) : std::nullopt;
    if (!fn) throw SyntaxError(agg.pos, "aggregate (none, count, sum, avg, min, max)",
                               detail::describe(agg));
    advance();
    v.y.aggregate = *fn;
    if (peek().kind == Tok::kSymbol && peek().text == "*") {
      advance();
      v.y.column = ColumnRef{"", "*"};
    } else {
      v.y.column = column_ref();
    }
    if (accept_word("color")) v.color = column_ref();

    if (accept_word("transform")) {
      bool any = false;
      if (accept_word("filter")) {
        any = true;
        Predicate p;
        do {
          p.atoms.push_back(comparison());
        } while (accept_word("and"));
        v.filter = std::move(p);
      }
      if (accept_word("group")) {
        any = true;
        expect_word("x");
        v.group_x = true;
      }
      if (accept_word("bin")) {
        any = true;
        expect_word("x");
        expect_word("by");
        const Token& u = peek();
        auto unit = u.kind == Tok::kIdent ? parse_time_unit(u.text) : std::nullopt;
        if (!unit) throw SyntaxError(u.pos, "time unit (year, month, day, weekday)",
                                     detail::describe(u));
        advance();
        v.bin = *unit;
      }
      if (accept_word("sort")) {
        any = true;
        VisSort s;
        if (accept_word("x")) {
          s.target = VisSort::Target::kX;
        } else if (accept_word("y")) {
          s.target = VisSort::Target::kY;
        } else {
          throw SyntaxError(peek().pos, "sort target (x, y)", detail::describe(peek()));
        }
        if (accept_word("asc")) {
          s.direction = SortDirection::kAsc;
        } else if (accept_word("desc")) {
          s.direction = SortDirection::kDesc;
        } else {
          throw SyntaxError(peek().pos, "sort direction (asc, desc)", detail::describe(peek()));
        }
        v.sort = s;
      }
      if (accept_word("topk")) {
        any = true;
        const Token& n = peek();
        if (n.kind != Tok::kNumber || n.text.find_first_not_of("0123456789") != std::string::npos)
          throw SyntaxError(n.pos, "positive integer", detail::describe(n));
        try {
          v.topk = std::stoll(n.text);
        } catch (const std::exception&) {
          throw SyntaxError(n.pos, "positive integer", n.text);
        }
        advance();
      }
      if (!any)
        throw SyntaxError(peek().pos, "transform clause (filter, group, bin, sort, topk)",
                          detail::describe(peek()));
    }
    if (peek().kind != Tok::kEnd)
      throw SyntaxError(peek().pos, "end of query", detail::describe(peek()));

    if (v.color) {
      if (base == ChartType::kPie) throw InvariantViolation("pie must not have a color channel");
      v.mark = with_color(base);
    } else {
      v.mark = base;
    }
    check_vis_invariants(v);
    return v;
  }

 private:
  static bool is_word(const Token& t, std::string_view w) {
    return t.kind == Tok::kIdent && iequals(t.text, w);
  }
  const Token& peek() const { return tokens_[pos_]; }
  void advance() {
    if (pos_ + 1 < tokens_.size()) ++pos_;
  }
  bool accept_word(std::string_view w) {
    if (!is_word(peek(), w)) return false;
    advance();
    return true;
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) throw SyntaxError(peek().pos, "'" + std::string(w) + "'",
                                           detail::describe(peek()));
  }
  void expect_symbol(std::string_view s) {
    if (peek().kind != Tok::kSymbol || peek().text != s)
      throw SyntaxError(peek().pos, "'" + std::string(s) + "'", detail::describe(peek()));
    advance();
  }
  std::string identifier(std::string_view what) {
    const Token& t = peek();
    if (t.kind != Tok::kIdent) throw SyntaxError(t.pos, std::string(what), detail::describe(t));
    advance();
    return to_lower(t.text);
  }
  ColumnRef column_ref() { return ColumnRef::parse(identifier("column name")); }

  Comparison comparison() {
    Comparison c;
    c.column = column_ref();
    const Token& op = peek();
    if (is_word(op, "like")) {
      c.op = CompareOp::kLike;
    } else if (op.kind == Tok::kSymbol && op.text == "=") {
      c.op = CompareOp::kEq;
    } else if (op.kind == Tok::kSymbol && (op.text == "!=" || op.text == "<>")) {
      c.op = CompareOp::kNe;
    } else if (op.kind == Tok::kSymbol && op.text == "<") {
      c.op = CompareOp::kLt;
    } else if (op.kind == Tok::kSymbol && op.text == "<=") {
      c.op = CompareOp::kLe;
    } else if (op.kind == Tok::kSymbol && op.text == ">") {
      c.op = CompareOp::kGt;
    } else if (op.kind == Tok::kSymbol && op.text == ">=") {
      c.op = CompareOp::kGe;
    } else {
      throw SyntaxError(op.pos, "comparison operator", detail::describe(op));
    }
    advance();
    const Token& lit = peek();
    if (lit.kind == Tok::kString) {
      c.literal = Value(lit.text);
      advance();
    } else {
      bool negative = false;
      if (lit.kind == Tok::kSymbol && lit.text == "-") {
        negative = true;
        advance();
      }
      const Token& n = peek();
      auto num = n.kind == Tok::kNumber ? parse_number(n.text) : std::nullopt;
      if (!num) throw SyntaxError(n.pos, "literal (quoted text or number)", detail::describe(n));
      advance();
      c.literal = Value(negative ? -*num : *num);
    }
    if (c.op == CompareOp::kLike && !c.literal.is_text())
      throw InvariantViolation("like requires a text literal");
    return c;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string ident(std::string_view s) { return to_lower(s); }
std::string ref(const ColumnRef& r) { return to_lower(r.to_string()); }

}  // namespace

VisQuery parse_vega_zero(std::string_view text) { return VegaZeroParser(text).parse(); }

std::string serialize_vega_zero(const VisQuery& v) {
  std::string out = "mark ";
  out += mark_token(v.mark);
  if (v.data) {
    out += " data " + ident(*v.data);
    for (const auto& j : v.joins)
      out += " join " + ident(j.table) + " on " + ref(j.left) + " = " + ref(j.right);
  }
  out += " encoding x " + ref(v.x);
  out += " y aggregate ";
  out += agg_name(v.y.aggregate);
  out += " " + ref(v.y.column);
  if (v.color) out += " color " + ref(*v.color);
  if (v.filter || v.group_x || v.bin || v.sort || v.topk) {
    out += " transform";
    if (v.filter) {
      out += " filter ";
      for (std::size_t i = 0; i < v.filter->atoms.size(); ++i) {
        const auto& a = v.filter->atoms[i];
        if (i) out += " and ";
        out += ref(a.column);
        out += " ";
        out += compare_op_symbol(a.op);
        out += " " + render_literal(a.literal);
      }
    }
    if (v.group_x) out += " group x";
    if (v.bin) {
      out += " bin x by ";
      out += time_unit_name(*v.bin);
    }
    if (v.sort) {
      out += v.sort->target == VisSort::Target::kX ? " sort x" : " sort y";
      out += v.sort->direction == SortDirection::kAsc ? " asc" : " desc";
    }
    if (v.topk) out += " topk " + std::to_string(*v.topk);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

std::string Violation::to_string() const {
  static constexpr std::string_view kNames[] = {"UnknownTable",    "UnknownColumn",
                                                "AmbiguousData",   "AmbiguousColumn",
                                                "RoleViolation",   "LiteralMismatch",
                                                "BadJoin"};
  return std::string(kNames[static_cast<int>(kind)]) + "(" + subject + ")";
}

const Table* bound_table(const VisQuery& v, const Database& db) {
  if (v.data) return db.find_table(*v.data);
  return db.tables().size() == 1 ? &db.tables().front() : nullptr;
}

namespace {

bool is_scatter_family(ChartType ct) {
  return ct == ChartType::kScatter || ct == ChartType::kGroupedScatter;
}
bool is_line_family(ChartType ct) {
  return ct == ChartType::kLine || ct == ChartType::kGroupedLine;
}

}  // namespace

std::vector<Violation> validate(const VisQuery& v, const Database& db) {
  using Kind = Violation::Kind;
  std::vector<Violation> out;
  try {
    check_vis_invariants(v);
  } catch (const InvariantViolation& e) {
    out.push_back({Kind::kRoleViolation, "query", e.what()});
    return out;
  }

  if (!v.data && db.tables().size() != 1) {
    out.push_back({Kind::kAmbiguousData, db.id(),
                   "no data clause and database has " + std::to_string(db.tables().size()) +
                       " tables"});
    return out;
  }
  std::string missing;
  auto tables = detail::query_tables(v, db, &missing);
  if (tables.empty()) {
    out.push_back({Kind::kUnknownTable, missing, "no table '" + missing + "'"});
    return out;
  }
  for (std::size_t i = 1; i < tables.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (tables[i] == tables[j])
        out.push_back({Kind::kBadJoin, tables[i]->name(), "table joined twice"});
    }
  }
  detail::Scope scope(tables);

  auto resolve = [&](const ColumnRef& r) -> std::optional<Role> {
    std::size_t idx = 0;
    switch (scope.find(r, &idx)) {
      case detail::Scope::Lookup::kFound:
        return scope.columns()[idx].role;
      case detail::Scope::Lookup::kAmbiguous:
        out.push_back({Kind::kAmbiguousColumn, r.to_string(),
                       "column '" + r.to_string() + "' matches several joined tables"});
        return std::nullopt;
      case detail::Scope::Lookup::kMissing:
        break;
    }
    out.push_back({Kind::kUnknownColumn, r.to_string(), "no column '" + r.to_string() + "'"});
    return std::nullopt;
  };

  for (std::size_t i = 0; i < v.joins.size(); ++i) {
    const auto& j = v.joins[i];
    auto lr = resolve(j.left);
    auto rr = resolve(j.right);
    if (!lr || !rr) continue;
    std::size_t li = 0, ri = 0;
    scope.find(j.left, &li);
    scope.find(j.right, &ri);
    auto lt = scope.table_index(scope.columns()[li].table);
    auto rt = scope.table_index(scope.columns()[ri].table);
    // the joined table must be one side, the other side an earlier table
    std::size_t self = i + 1;
    bool ok = (*lt == self && *rt < self) || (*rt == self && *lt < self);
    if (!ok)
      out.push_back({Kind::kBadJoin, j.table,
                     "join condition must connect '" + j.table + "' to an earlier table"});
  }

  auto role_violation = [&](const std::string& subject, const std::string& msg) {
    out.push_back({Kind::kRoleViolation, subject, msg});
  };

  auto x_role = resolve(v.x);
  std::optional<Role> y_role;
  if (!v.y.column.is_star()) y_role = resolve(v.y.column);
  std::optional<Role> color_role;
  if (v.color) color_role = resolve(*v.color);

  if (x_role) {
    if (is_scatter_family(v.mark) && *x_role != Role::kQuantitative)
      role_violation("x", "x must be quantitative for " + std::string(chart_type_name(v.mark)));
    if (is_line_family(v.mark) && *x_role != Role::kTemporal && !v.sort)
      role_violation("x", "x must be temporal or sorted for a line chart");
    if (!is_scatter_family(v.mark) && !is_line_family(v.mark) && *x_role == Role::kQuantitative)
      role_violation("x", "x must be categorical or temporal for " +
                              std::string(chart_type_name(v.mark)));
    if (v.bin && *x_role != Role::kTemporal) role_violation("x", "bin requires a temporal x");
  }
  if (is_scatter_family(v.mark) && v.y.aggregate != AggFn::kNone)
    role_violation("y", "y must not be aggregated for a scatter plot");
  if (y_role && v.y.aggregate != AggFn::kCount && *y_role != Role::kQuantitative)
    role_violation("y", "y must be quantitative");
  if (color_role && *color_role != Role::kCategorical)
    role_violation("color", "color must be categorical");

  if (v.filter) {
    for (const auto& a : v.filter->atoms) {
      auto role = resolve(a.column);
      if (!role) continue;
      const std::string subject = a.column.to_string();
      bool ok = true;
      if (a.op == CompareOp::kLike) {
        ok = *role == Role::kCategorical && a.literal.is_text();
      } else if (*role == Role::kQuantitative) {
        ok = a.literal.is_number();
      } else if (*role == Role::kTemporal) {
        ok = a.literal.is_text() && parse_date(a.literal.text()).has_value();
      } else {
        ok = a.literal.is_text();
      }
      if (!ok)
        out.push_back({Kind::kLiteralMismatch, subject,
                       "literal " + render_literal(a.literal) + " does not fit " +
                           std::string(role_name(*role)) + " column '" + subject + "'"});
    }
  }
  return out;
}

}  // namespace vizforge
