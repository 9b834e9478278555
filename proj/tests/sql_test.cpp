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

#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "vizforge/error.hpp"
#include "vizforge/sql.hpp"

namespace vizforge {
namespace {

std::string unsupported(std::string_view sql) {
  try {
    parse_sql(sql);
  } catch (const UnsupportedSql& e) {
    return e.construct();
  }
  return "<accepted>";
}

TEST(ParseSql, ChinaQuery) {
  SqlQuery q = parse_sql(
      "SELECT date, SUM(confirmed) FROM covid19 WHERE country = 'China' GROUP BY date");
  SqlQuery expected;
  expected.select_items = {{AggFn::kNone, {"", "date"}}, {AggFn::kSum, {"", "confirmed"}}};
  expected.from_tables = {"covid19"};
  expected.where_clause = Predicate{{{{"", "country"}, CompareOp::kEq, Value("China")}}};
  expected.group_by = {{"", "date"}};
  EXPECT_EQ(q, expected);
  EXPECT_EQ(serialize_sql(q),
            "SELECT date, SUM(confirmed) FROM covid19 WHERE country = 'China' GROUP BY date");
}

TEST(ParseSql, MinimalQuery) {
  SqlQuery q = parse_sql("select a from t");
  EXPECT_EQ(q.select_items.size(), 1u);
  EXPECT_EQ(q.from_tables, std::vector<std::string>{"t"});
  EXPECT_FALSE(q.where_clause);
  EXPECT_TRUE(q.group_by.empty());
  EXPECT_FALSE(q.order_by);
  EXPECT_FALSE(q.limit);
  EXPECT_EQ(serialize_sql(q), "SELECT a FROM t");
}

TEST(ParseSql, JoinWithAliases) {
  SqlQuery q = parse_sql(
      "SELECT T1.a, count(*) FROM t1 AS T1 JOIN t2 T2 ON T1.id = T2.id GROUP BY T1.a");
  ASSERT_EQ(q.joins.size(), 1u);
  EXPECT_EQ(q.joins[0].left, (ColumnRef{"t1", "id"}));
  EXPECT_EQ(q.joins[0].right, (ColumnRef{"t2", "id"}));
  EXPECT_EQ(serialize_sql(q), "SELECT t1.a, COUNT(*) FROM t1 JOIN t2 ON t1.id = t2.id GROUP BY t1.a");
}

TEST(ParseSql, OrderByAliasAndLimit) {
  SqlQuery q = parse_sql(
      "SELECT name, SUM(budget) AS total FROM dept GROUP BY name ORDER BY total DESC LIMIT 3;");
  ASSERT_TRUE(q.order_by);
  EXPECT_EQ(q.order_by->item, 1u);
  EXPECT_EQ(q.order_by->direction, SortDirection::kDesc);
  EXPECT_EQ(q.limit, 3);
  EXPECT_EQ(serialize_sql(q),
            "SELECT name, SUM(budget) FROM dept GROUP BY name ORDER BY SUM(budget) DESC LIMIT 3");
}

TEST(ParseSql, LiteralsAndOperators) {
  SqlQuery q = parse_sql(
      "SELECT a FROM t WHERE b <> 'it''s' AND c >= -2.5 AND d LIKE \"U%\" AND e < 10");
  ASSERT_TRUE(q.where_clause);
  const auto& atoms = q.where_clause->atoms;
  ASSERT_EQ(atoms.size(), 4u);
  EXPECT_EQ(atoms[0].op, CompareOp::kNe);
  EXPECT_EQ(atoms[0].literal, Value("it's"));
  EXPECT_EQ(atoms[1].literal, Value(-2.5));
  EXPECT_EQ(atoms[2].op, CompareOp::kLike);
  EXPECT_EQ(atoms[2].literal, Value("U%"));
  EXPECT_EQ(serialize_sql(q),
            "SELECT a FROM t WHERE b != 'it''s' AND c >= -2.5 AND d LIKE 'U%' AND e < 10");
}

TEST(ParseSql, UnsupportedConstructsAreNamed) {
  EXPECT_EQ(unsupported("SELECT a FROM t WHERE x IN (SELECT b FROM u)"), "subquery");
  EXPECT_EQ(unsupported("SELECT a FROM t GROUP BY a HAVING count(*) > 1"), "HAVING");
  EXPECT_EQ(unsupported("SELECT a FROM t WHERE a = 1 OR a = 2"), "OR");
  EXPECT_EQ(unsupported("SELECT a FROM t UNION SELECT a FROM u"), "UNION");
  EXPECT_EQ(unsupported("SELECT a FROM t INTERSECT SELECT a FROM u"), "INTERSECT");
  EXPECT_EQ(unsupported("SELECT a + 1 FROM t"), "arithmetic expression");
  EXPECT_EQ(unsupported("SELECT rank() OVER (ORDER BY a) FROM t"), "window function");
  EXPECT_EQ(unsupported("SELECT DISTINCT a FROM t"), "DISTINCT");
  EXPECT_EQ(unsupported("SELECT * FROM t"), "SELECT *");
  EXPECT_EQ(unsupported("SELECT a FROM t, u"), "comma join");
  EXPECT_EQ(unsupported("SELECT a FROM t LEFT JOIN u ON t.id = u.id"), "LEFT JOIN");
  EXPECT_EQ(unsupported("SELECT a FROM t ORDER BY a, b"), "multiple ORDER BY targets");
  EXPECT_EQ(unsupported("SELECT a FROM t WHERE a = b"), "column comparison");
  EXPECT_EQ(unsupported("SELECT a FROM t WHERE NOT a = 1"), "NOT");
  EXPECT_EQ(unsupported("SELECT a FROM t ORDER BY b"), "ORDER BY on an unselected expression");
}

TEST(ParseSql, SyntaxErrorsReportPosition) {
  try {
    // `FORM` reads as a bare alias of `a`, so the parser trips over `t`
    parse_sql("SELECT a FORM t");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 14u);
    EXPECT_EQ(e.expected(), "FROM");
  }
  EXPECT_THROW(parse_sql(""), SyntaxError);
  EXPECT_THROW(parse_sql("SELECT a FROM t LIMIT 0"), SyntaxError);
  EXPECT_THROW(parse_sql("SELECT a FROM t WHERE a = 'open"), SyntaxError);
  EXPECT_THROW(parse_sql("SELECT a FROM t GROUP BY b"), InvariantViolation);
}

TEST(SqlRoundTrip, RandomQueries) {
  testing::Rng rng(20240501);
  for (int i = 0; i < 2000; ++i) {
    SqlQuery q = testing::random_sql(rng);
    std::string text = serialize_sql(q);
    SqlQuery back;
    ASSERT_NO_THROW(back = parse_sql(text)) << text;
    ASSERT_EQ(back, q) << text;
    EXPECT_EQ(serialize_sql(back), text);
  }
}

TEST(SqlFuzz, EveryInputYieldsAstOrDiagnostic) {
  testing::Rng rng(99);
  const std::vector<std::string> vocab = {
      "SELECT", "FROM", "WHERE", "GROUP", "BY", "ORDER", "LIMIT", "JOIN", "ON", "AND", "OR",
      "count(", "sum(", ")", "(", "*", ",", "=", "<", ">=", "'x'", "'", "\"", "3", "-", ".",
      "a", "t", "t.a", "AS", "DESC", "LIKE", "HAVING", "UNION", ";"};
  int parsed = 0;
  for (int i = 0; i < 20000; ++i) {
    std::string text = testing::random_noise(rng, vocab);
    try {
      SqlQuery q = parse_sql(text);
      check_sql_invariants(q);
      ++parsed;
    } catch (const Error&) {
      // a diagnostic is the expected outcome for noise
    }
  }
  SUCCEED() << parsed << " inputs parsed";
}

}  // namespace
}  // namespace vizforge
