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

#include "vizforge/sql.hpp"

#include <map>

#include "lexer.hpp"
#include "vizforge/error.hpp"

namespace vizforge {

namespace {

using detail::Tok;
using detail::Token;

bool is_keyword(const Token& t, std::string_view kw) {
  return t.kind == Tok::kIdent && iequals(t.text, kw);
}

// Words that may never be a bare table alias or column name.
constexpr std::string_view kReserved[] = {
    "select", "from",  "where", "group",  "order",  "by",     "limit", "join",  "inner",
    "on",     "and",   "or",    "as",     "having", "union",  "intersect", "except",
    "left",   "right", "outer", "cross",  "full",   "natural", "not",  "in",    "between",
    "is",     "like",  "asc",   "desc",   "distinct", "offset", "over", "exists", "case",
    "when",   "then",  "else",  "end",    "null",   "all",    "any",   "partition", "using"};

bool reserved(const Token& t) {
  if (t.kind != Tok::kIdent) return false;
  for (auto kw : kReserved) {
    if (iequals(t.text, kw)) return true;
  }
  return false;
}

class SqlParser {
 public:
  explicit SqlParser(std::string_view text)
      : tokens_(detail::lex(text, detail::LexOptions{.double_quoted_strings = true})) {}

  SqlQuery parse() {
    scan_for_unsupported();
    SqlQuery q;
    expect_keyword("SELECT");
    if (is_keyword(peek(), "DISTINCT") || is_keyword(peek(), "ALL"))
      throw UnsupportedSql(upper(peek().text));
    parse_select_list(q);
    expect_keyword("FROM");
    parse_from(q);
    if (accept_keyword("WHERE")) q.where_clause = parse_predicate();
    if (accept_keyword("GROUP")) {
      expect_keyword("BY");
      do {
        q.group_by.push_back(parse_column_ref());
      } while (accept_symbol(","));
    }
    if (is_keyword(peek(), "HAVING")) throw UnsupportedSql("HAVING");
    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      q.order_by = parse_order_target(q);
    }
    if (accept_keyword("LIMIT")) {
      const Token& t = peek();
      if (t.kind != Tok::kNumber || t.text.find_first_not_of("0123456789") != std::string::npos)
        throw SyntaxError(t.pos, "positive integer", detail::describe(t));
      std::int64_t n = 0;
      try {
        n = std::stoll(t.text);
      } catch (const std::exception&) {
        throw SyntaxError(t.pos, "positive integer", t.text);
      }
      if (n <= 0) throw SyntaxError(t.pos, "positive integer", t.text);
      q.limit = n;
      advance();
      if (is_keyword(peek(), "OFFSET") || (peek().kind == Tok::kSymbol && peek().text == ","))
        throw UnsupportedSql("OFFSET");
    }
    accept_symbol(";");
    if (peek().kind != Tok::kEnd) {
      if (is_keyword(peek(), "UNION") || is_keyword(peek(), "INTERSECT") ||
          is_keyword(peek(), "EXCEPT"))
        throw UnsupportedSql(upper(peek().text));
      throw SyntaxError(peek().pos, "end of query", detail::describe(peek()));
    }
    resolve_aliases(q);
    check_joins(q);
    check_sql_invariants(q);
    return q;
  }

 private:
  // Constructs rejected wherever they appear, so the diagnostic names the construct
  // rather than the first token the grammar trips over.
  void scan_for_unsupported() {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (t.kind != Tok::kIdent) continue;
      if (i > 0 && is_keyword(t, "SELECT")) {
        throw UnsupportedSql("subquery");
      }
      if (is_keyword(t, "UNION") || is_keyword(t, "INTERSECT") || is_keyword(t, "EXCEPT"))
        throw UnsupportedSql(upper(t.text));
      if (is_keyword(t, "HAVING")) throw UnsupportedSql("HAVING");
      if (is_keyword(t, "OR")) throw UnsupportedSql("OR");
      if (is_keyword(t, "OVER")) throw UnsupportedSql("window function");
    }
  }

  static std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  void advance() {
    if (pos_ + 1 < tokens_.size()) ++pos_;
  }

  bool accept_keyword(std::string_view kw) {
    if (!is_keyword(peek(), kw)) return false;
    advance();
    return true;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) throw SyntaxError(peek().pos, std::string(kw), detail::describe(peek()));
  }
  bool accept_symbol(std::string_view s) {
    if (peek().kind != Tok::kSymbol || peek().text != s) return false;
    advance();
    return true;
  }
  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s))
      throw SyntaxError(peek().pos, "'" + std::string(s) + "'", detail::describe(peek()));
  }

  std::string parse_identifier(std::string_view what) {
    const Token& t = peek();
    if (t.kind != Tok::kIdent || reserved(t))
      throw SyntaxError(t.pos, std::string(what), detail::describe(t));
    advance();
    return t.text;
  }

  ColumnRef parse_column_ref() {
    std::string first = parse_identifier("column name");
    if (accept_symbol(".")) {
      std::string second = parse_identifier("column name");
      reject_arithmetic();
      return ColumnRef{first, second};
    }
    if (peek().kind == Tok::kSymbol && peek().text == "(")
      throw UnsupportedSql("function " + to_lower(first));
    reject_arithmetic();
    return ColumnRef{"", first};
  }

  void reject_arithmetic() {
    const Token& t = peek();
    if (t.kind == Tok::kSymbol &&
        (t.text == "+" || t.text == "-" || t.text == "*" || t.text == "/" || t.text == "%" ||
         t.text == "|"))
      throw UnsupportedSql("arithmetic expression");
  }

  SelectItem parse_select_item() {
    const Token& t = peek();
    if (t.kind == Tok::kSymbol && t.text == "*") throw UnsupportedSql("SELECT *");
    if (t.kind == Tok::kSymbol && t.text == "(") throw UnsupportedSql("parenthesized expression");
    if (t.kind == Tok::kNumber || t.kind == Tok::kString)
      throw UnsupportedSql("constant select item");
    SelectItem item;
    if (t.kind == Tok::kIdent && peek(1).kind == Tok::kSymbol && peek(1).text == "(") {
      auto fn = parse_agg(t.text);
      if (!fn || *fn == AggFn::kNone) throw UnsupportedSql("function " + to_lower(t.text));
      item.agg = *fn;
      advance();
      advance();
      if (is_keyword(peek(), "DISTINCT")) throw UnsupportedSql("DISTINCT");
      if (accept_symbol("*")) {
        if (item.agg != AggFn::kCount)
          throw SyntaxError(peek().pos, "column name", "*");
        item.column = ColumnRef{"", "*"};
      } else {
        item.column = parse_column_ref();
      }
      expect_symbol(")");
      reject_arithmetic();
    } else {
      item.column = parse_column_ref();
    }
    return item;
  }

  void parse_select_list(SqlQuery& q) {
    do {
      q.select_items.push_back(parse_select_item());
      if (accept_keyword("AS")) {
        select_aliases_[to_lower(parse_identifier("alias"))] = q.select_items.size() - 1;
      } else if (peek().kind == Tok::kIdent && !reserved(peek())) {
        select_aliases_[to_lower(peek().text)] = q.select_items.size() - 1;
        advance();
      }
    } while (accept_symbol(","));
  }

  void parse_table_ref(SqlQuery& q) {
    if (peek().kind == Tok::kSymbol && peek().text == "(") throw UnsupportedSql("subquery");
    std::string name = parse_identifier("table name");
    for (const auto& existing : q.from_tables) {
      if (iequals(existing, name)) throw UnsupportedSql("self-join");
    }
    q.from_tables.push_back(name);
    std::string alias;
    if (accept_keyword("AS")) {
      alias = parse_identifier("alias");
    } else if (peek().kind == Tok::kIdent && !reserved(peek())) {
      alias = peek().text;
      advance();
    }
    if (!alias.empty()) {
      auto key = to_lower(alias);
      if (table_aliases_.count(key)) throw SyntaxError(peek().pos, "unique alias", alias);
      table_aliases_[key] = name;
    }
  }

  void parse_from(SqlQuery& q) {
    parse_table_ref(q);
    while (true) {
      if (peek().kind == Tok::kSymbol && peek().text == ",") throw UnsupportedSql("comma join");
      for (auto kw : {"LEFT", "RIGHT", "FULL", "OUTER", "CROSS", "NATURAL"}) {
        if (is_keyword(peek(), kw)) throw UnsupportedSql(upper(kw) + std::string(" JOIN"));
      }
      bool inner = accept_keyword("INNER");
      if (!accept_keyword("JOIN")) {
        if (inner) throw SyntaxError(peek().pos, "JOIN", detail::describe(peek()));
        break;
      }
      parse_table_ref(q);
      if (is_keyword(peek(), "USING")) throw UnsupportedSql("JOIN USING");
      expect_keyword("ON");
      do {
        JoinCondition cond;
        cond.left = parse_column_ref();
        const Token& op = peek();
        if (op.kind != Tok::kSymbol || op.text != "=")
          throw UnsupportedSql("non-equality join condition");
        advance();
        cond.right = parse_column_ref();
        q.joins.push_back(cond);
      } while (accept_keyword("AND"));
      join_owner_.resize(q.joins.size(), q.from_tables.size() - 1);
    }
  }

  Value parse_literal() {
    const Token& t = peek();
    if (t.kind == Tok::kString) {
      advance();
      return Value(t.text);
    }
    bool negative = false;
    if (t.kind == Tok::kSymbol && t.text == "-" && peek(1).kind == Tok::kNumber) {
      negative = true;
      advance();
    }
    const Token& n = peek();
    if (n.kind == Tok::kNumber) {
      auto v = parse_number(n.text);
      if (!v) throw SyntaxError(n.pos, "number", n.text);
      advance();
      reject_arithmetic();
      return Value(negative ? -*v : *v);
    }
    if (n.kind == Tok::kIdent && !reserved(n)) throw UnsupportedSql("column comparison");
    if (is_keyword(n, "NULL")) throw UnsupportedSql("NULL comparison");
    if (n.kind == Tok::kSymbol && n.text == "(") throw UnsupportedSql("subquery");
    throw SyntaxError(n.pos, "literal", detail::describe(n));
  }

  Predicate parse_predicate() {
    Predicate p;
    do {
      if (is_keyword(peek(), "NOT")) throw UnsupportedSql("NOT");
      if (peek().kind == Tok::kSymbol && peek().text == "(")
        throw UnsupportedSql("parenthesized predicate");
      if (peek().kind == Tok::kString || peek().kind == Tok::kNumber)
        throw UnsupportedSql("literal on the left of a comparison");
      Comparison atom;
      atom.column = parse_column_ref();
      const Token& op = peek();
      if (op.kind == Tok::kSymbol) {
        static const std::map<std::string, CompareOp> kOps = {
            {"=", CompareOp::kEq},  {"!=", CompareOp::kNe}, {"<>", CompareOp::kNe},
            {"<", CompareOp::kLt},  {"<=", CompareOp::kLe}, {">", CompareOp::kGt},
            {">=", CompareOp::kGe}};
        auto it = kOps.find(op.text);
        if (it == kOps.end()) throw SyntaxError(op.pos, "comparison operator", op.text);
        atom.op = it->second;
      } else if (is_keyword(op, "LIKE")) {
        atom.op = CompareOp::kLike;
      } else if (is_keyword(op, "IN") || is_keyword(op, "BETWEEN") || is_keyword(op, "IS") ||
                 is_keyword(op, "NOT")) {
        throw UnsupportedSql(upper(op.text));
      } else {
        throw SyntaxError(op.pos, "comparison operator", detail::describe(op));
      }
      advance();
      atom.literal = parse_literal();
      if (atom.op == CompareOp::kLike && !atom.literal.is_text())
        throw SyntaxError(op.pos, "text literal after LIKE", atom.literal.to_string());
      p.atoms.push_back(std::move(atom));
    } while (accept_keyword("AND"));
    return p;
  }

  OrderBy parse_order_target(const SqlQuery& q) {
    OrderBy order;
    bool found = false;
    // ORDER BY may name a select alias
    bool call_or_qualified = peek(1).kind == Tok::kSymbol && (peek(1).text == "(" || peek(1).text == ".");
    if (peek().kind == Tok::kIdent && !call_or_qualified) {
      auto it = select_aliases_.find(to_lower(peek().text));
      if (it != select_aliases_.end()) {
        order.item = it->second;
        found = true;
        advance();
      }
    }
    if (!found) {
      SelectItem target = parse_select_item();
      for (std::size_t i = 0; i < q.select_items.size(); ++i) {
        const auto& item = q.select_items[i];
        if (item.agg == target.agg && same_column(item.column, target.column)) {
          order.item = i;
          found = true;
          break;
        }
      }
      if (!found) throw UnsupportedSql("ORDER BY on an unselected expression");
    }
    if (accept_keyword("DESC")) {
      order.direction = SortDirection::kDesc;
    } else {
      accept_keyword("ASC");
    }
    if (peek().kind == Tok::kSymbol && peek().text == ",")
      throw UnsupportedSql("multiple ORDER BY targets");
    return order;
  }

  void resolve(ColumnRef& ref) const {
    if (ref.table.empty()) return;
    auto it = table_aliases_.find(to_lower(ref.table));
    if (it != table_aliases_.end()) ref.table = it->second;
  }

  void resolve_aliases(SqlQuery& q) const {
    for (auto& item : q.select_items) resolve(item.column);
    for (auto& j : q.joins) {
      resolve(j.left);
      resolve(j.right);
    }
    if (q.where_clause) {
      for (auto& a : q.where_clause->atoms) resolve(a.column);
    }
    for (auto& g : q.group_by) resolve(g);
  }

  void check_joins(const SqlQuery& q) const {
    for (std::size_t i = 0; i < q.joins.size(); ++i) {
      const auto& owner = q.from_tables[join_owner_[i]];
      const auto& j = q.joins[i];
      if (!iequals(j.left.table, owner) && !iequals(j.right.table, owner))
        throw InvariantViolation("join condition " + j.left.to_string() + " = " +
                                 j.right.to_string() + " does not reference joined table '" +
                                 owner + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::map<std::string, std::string> table_aliases_;
  std::map<std::string, std::size_t> select_aliases_;
  std::vector<std::size_t> join_owner_;
};

std::string render_item(const SelectItem& item) {
  if (item.agg == AggFn::kNone) return item.column.to_string();
  std::string fn(agg_name(item.agg));
  for (char& c : fn) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return fn + "(" + item.column.to_string() + ")";
}

std::string render_predicate(const Predicate& p) {
  std::string out;
  for (std::size_t i = 0; i < p.atoms.size(); ++i) {
    const auto& a = p.atoms[i];
    if (i) out += " AND ";
    out += a.column.to_string() + " ";
    out += a.op == CompareOp::kLike ? "LIKE" : std::string(compare_op_symbol(a.op));
    out += " " + render_literal(a.literal);
  }
  return out;
}

std::optional<std::size_t> table_position(const SqlQuery& q, std::string_view table) {
  for (std::size_t i = 0; i < q.from_tables.size(); ++i) {
    if (iequals(q.from_tables[i], table)) return i;
  }
  return std::nullopt;
}

}  // namespace

SqlQuery parse_sql(std::string_view text) { return SqlParser(text).parse(); }

void check_sql_invariants(const SqlQuery& q) {
  if (q.select_items.empty()) throw InvariantViolation("query has no select items");
  if (q.from_tables.empty()) throw InvariantViolation("query has no FROM table");
  for (const auto& item : q.select_items) {
    if (item.column.is_star() && item.agg != AggFn::kCount)
      throw InvariantViolation("'*' is only allowed inside COUNT");
  }
  std::size_t last_owner = 0;
  for (const auto& j : q.joins) {
    auto l = table_position(q, j.left.table);
    auto r = table_position(q, j.right.table);
    if (!l || !r)
      throw InvariantViolation("join condition " + j.left.to_string() + " = " +
                               j.right.to_string() + " must reference tables in FROM");
    if (*l == *r) throw InvariantViolation("join condition must reference two distinct tables");
    std::size_t owner = std::max(*l, *r);
    if (owner < last_owner) throw InvariantViolation("join conditions out of table order");
    last_owner = owner;
  }
  if (q.from_tables.size() > 1) {
    for (std::size_t t = 1; t < q.from_tables.size(); ++t) {
      bool connected = false;
      for (const auto& j : q.joins) {
        if (std::max(*table_position(q, j.left.table), *table_position(q, j.right.table)) == t)
          connected = true;
      }
      if (!connected)
        throw InvariantViolation("table '" + q.from_tables[t] + "' has no join condition");
    }
  }
  for (const auto& g : q.group_by) {
    bool found = false;
    for (const auto& item : q.select_items) {
      if (!item.column.is_star() && same_column(item.column, g)) found = true;
    }
    if (!found)
      throw InvariantViolation("GROUP BY column " + g.to_string() + " is not selected");
  }
  if (q.order_by && q.order_by->item >= q.select_items.size())
    throw InvariantViolation("ORDER BY references a missing select item");
  if (q.limit && *q.limit <= 0) throw InvariantViolation("LIMIT must be positive");
  if (q.where_clause) {
    for (const auto& a : q.where_clause->atoms) {
      if (a.op == CompareOp::kLike && !a.literal.is_text())
        throw InvariantViolation("LIKE requires a text literal");
      if (!a.literal.is_text() && !a.literal.is_number())
        throw InvariantViolation("comparison literal must be text or number");
    }
  }
}

std::string serialize_sql(const SqlQuery& q) {
  std::string out = "SELECT ";
  for (std::size_t i = 0; i < q.select_items.size(); ++i) {
    if (i) out += ", ";
    out += render_item(q.select_items[i]);
  }
  out += " FROM " + q.from_tables.front();
  for (std::size_t t = 1; t < q.from_tables.size(); ++t) {
    out += " JOIN " + q.from_tables[t] + " ON ";
    bool first = true;
    for (const auto& j : q.joins) {
      auto l = table_position(q, j.left.table);
      auto r = table_position(q, j.right.table);
      if (!l || !r || std::max(*l, *r) != t) continue;
      if (!first) out += " AND ";
      first = false;
      out += j.left.to_string() + " = " + j.right.to_string();
    }
  }
  if (q.where_clause && !q.where_clause->atoms.empty())
    out += " WHERE " + render_predicate(*q.where_clause);
  if (!q.group_by.empty()) {
    out += " GROUP BY ";
    for (std::size_t i = 0; i < q.group_by.size(); ++i) {
      if (i) out += ", ";
      out += q.group_by[i].to_string();
    }
  }
  if (q.order_by) {
    out += " ORDER BY " + render_item(q.select_items[q.order_by->item]);
    if (q.order_by->direction == SortDirection::kDesc) out += " DESC";
  }
  if (q.limit) out += " LIMIT " + std::to_string(*q.limit);
  return out;
}

}  // namespace vizforge
