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
#include "support/oracle.hpp"
#include "vizforge/engine.hpp"
#include "vizforge/error.hpp"

namespace vizforge {
namespace {

// 3 case types x 4 dates in Utah plus a few Ohio rows.
Database covid_fixture() {
  Table t("covid", {{"date", Role::kTemporal},
                    {"states", Role::kCategorical},
                    {"cases", Role::kCategorical},
                    {"number", Role::kQuantitative}});
  const char* kinds[] = {"confirmed", "deaths", "recovered"};
  for (int d = 1; d <= 4; ++d) {
    for (int k = 0; k < 3; ++k) {
      if (k == 2 && d > 2) continue;  // recovered only reported twice
      t.add_row({Value(Date{2020, 3, d}), Value("Utah"), Value(kinds[k]), Value(d * 10 + k)});
    }
    t.add_row({Value(Date{2020, 3, d}), Value("Ohio"), Value("confirmed"), Value(100 + d)});
  }
  return Database("covid_us", {std::move(t)});
}

TEST(Execute, UtahQuery) {
  Database db = covid_fixture();
  VisQuery v = parse_vega_zero(
      "mark line encoding x date y aggregate none number color cases transform filter states = 'Utah'");
  ResultTable r = execute(v, db);
  ASSERT_EQ(r.rows.size(), 10u);
  EXPECT_EQ(r.columns[0], (Column{"date", Role::kTemporal}));
  EXPECT_EQ(r.columns[1], (Column{"number", Role::kQuantitative}));
  EXPECT_EQ(r.columns[2], (Column{"cases", Role::kCategorical}));
  // x ascending, color as tiebreak
  EXPECT_EQ(r.rows[0], (Row{Value(Date{2020, 3, 1}), Value(10), Value("confirmed")}));
  EXPECT_EQ(r.rows[1], (Row{Value(Date{2020, 3, 1}), Value(11), Value("deaths")}));
  EXPECT_EQ(r.rows[2], (Row{Value(Date{2020, 3, 1}), Value(12), Value("recovered")}));
  EXPECT_EQ(r.rows[9], (Row{Value(Date{2020, 3, 4}), Value(41), Value("deaths")}));
}

TEST(Execute, FilterKeepsMatchingRows) {
  Database db = covid_fixture();
  VisQuery v = parse_vega_zero(
      "mark line encoding x date y aggregate none number color cases transform filter states = "
      "'Utah' and date <= '2020-03-02'");
  EXPECT_EQ(execute(v, db).rows.size(), 6u);
}

TEST(Execute, CountOverEmptyInputHasNoGroups) {
  Database db("d", {Table("t", {{"a", Role::kCategorical}})});
  ResultTable r = execute(parse_vega_zero("mark bar encoding x a y aggregate count *"), db);
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(r.columns.size(), 2u);
  EXPECT_EQ(r.columns[1].name, "count(*)");
}

TEST(Execute, SingleGroupEqualsWholeSum) {
  Table t("t", {{"g", Role::kCategorical}, {"v", Role::kQuantitative}},
          {{Value("a"), Value(1.5)}, {Value("a"), Value(2)}, {Value("a"), Value()}});
  Database db("d", {t});
  ResultTable r = execute(parse_vega_zero("mark bar encoding x g y aggregate sum v"), db);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0][1], Value(3.5));
  r = execute(parse_vega_zero("mark bar encoding x g y aggregate avg v"), db);
  EXPECT_EQ(r.rows[0][1], Value(1.75));
  r = execute(parse_vega_zero("mark bar encoding x g y aggregate count v"), db);
  EXPECT_EQ(r.rows[0][1], Value(2));
  r = execute(parse_vega_zero("mark bar encoding x g y aggregate count *"), db);
  EXPECT_EQ(r.rows[0][1], Value(3));
}

TEST(Execute, NullsGroupTogetherAndSortLast) {
  Table t("t", {{"g", Role::kCategorical}, {"v", Role::kQuantitative}},
          {{Value(), Value(1)}, {Value("b"), Value(2)}, {Value(), Value(3)}, {Value("a"), Value()}});
  Database db("d", {t});
  ResultTable r = execute(parse_vega_zero("mark bar encoding x g y aggregate sum v"), db);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0], (Row{Value("a"), Value()}));
  EXPECT_EQ(r.rows[1], (Row{Value("b"), Value(2)}));
  EXPECT_EQ(r.rows[2], (Row{Value(), Value(4)}));
  r = execute(parse_vega_zero("mark bar encoding x g y aggregate sum v transform sort y desc"), db);
  EXPECT_EQ(r.rows[0][1], Value(4));
  EXPECT_TRUE(r.rows[2][1].is_null());
}

TEST(Execute, SortAndTopk) {
  Table t("t", {{"g", Role::kCategorical}, {"v", Role::kQuantitative}},
          {{Value("a"), Value(5)}, {Value("b"), Value(9)}, {Value("c"), Value(1)},
           {Value("d"), Value(9)}});
  Database db("d", {t});
  ResultTable r = execute(
      parse_vega_zero("mark bar encoding x g y aggregate sum v transform sort y desc topk 2"), db);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0][0], Value("b"));
  EXPECT_EQ(r.rows[1][0], Value("d"));
}

TEST(Execute, WeekdayBinsSortInIsoOrder) {
  Table t("t", {{"d", Role::kTemporal}},
          {{Value(Date{2020, 3, 15})}, {Value(Date{2020, 3, 14})}, {Value(Date{2020, 3, 16})},
           {Value(Date{2020, 3, 9})}});
  Database db("d", {t});
  ResultTable r =
      execute(parse_vega_zero("mark bar encoding x d y aggregate count * transform bin x by weekday"), db);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0], (Row{Value("Mon"), Value(2)}));
  EXPECT_EQ(r.rows[1], (Row{Value("Sat"), Value(1)}));
  EXPECT_EQ(r.rows[2], (Row{Value("Sun"), Value(1)}));
  EXPECT_EQ(r.columns[0].role, Role::kCategorical);
}

TEST(BinTemporal, Labels) {
  Date d{2020, 3, 14};
  EXPECT_EQ(bin_label(d, TimeUnit::kYear), "2020");
  EXPECT_EQ(bin_label(d, TimeUnit::kMonth), "2020-03");
  EXPECT_EQ(bin_label(d, TimeUnit::kWeekday), "Sat");
  EXPECT_EQ(bin_label(d, TimeUnit::kDay), "2020-03-14");
  std::vector<Date> dates = {d, {2021, 1, 4}};
  EXPECT_EQ(bin_temporal(dates, TimeUnit::kWeekday), (std::vector<std::string>{"Sat", "Mon"}));
  EXPECT_EQ(weekday_rank("Sun"), 7);
  EXPECT_EQ(weekday_rank("sun"), 0);
}

TEST(EvalPredicate, Examples) {
  Table t("t", {{"country", Role::kCategorical}, {"x", Role::kQuantitative}});
  Row china{Value("China"), Value()};
  Predicate eq{{{{"", "country"}, CompareOp::kEq, Value("China")}}};
  EXPECT_TRUE(eval_predicate(t, china, eq));
  Predicate x5{{{{"", "x"}, CompareOp::kEq, Value(5)}}};
  EXPECT_FALSE(eval_predicate(t, china, x5));
  Predicate ne{{{{"", "x"}, CompareOp::kNe, Value(5)}}};
  EXPECT_FALSE(eval_predicate(t, china, ne));

  Table names("t", {{"name", Role::kCategorical}});
  Predicate like{{{{"", "name"}, CompareOp::kLike, Value("U%")}}};
  EXPECT_TRUE(eval_predicate(names, {Value("Utah")}, like));
  EXPECT_FALSE(eval_predicate(names, {Value("Ohio")}, like));
}

TEST(LikeMatch, Wildcards) {
  EXPECT_TRUE(like_match("Utah", "U%"));
  EXPECT_TRUE(like_match("utah", "U%"));
  EXPECT_TRUE(like_match("Utah", "_tah"));
  EXPECT_TRUE(like_match("Utah", "%"));
  EXPECT_TRUE(like_match("", "%"));
  EXPECT_FALSE(like_match("", "_"));
  EXPECT_TRUE(like_match("New York", "%w%o%"));
  EXPECT_FALSE(like_match("Utah", "U_"));
  EXPECT_TRUE(like_match("aaa", "%a%a%a%"));
  EXPECT_FALSE(like_match("aa", "%a%a%a%"));
}

TEST(InnerJoin, Examples) {
  Table t1("t1", {{"id", Role::kQuantitative}, {"a", Role::kCategorical}},
           {{Value(1), Value("x")}, {Value(2), Value("y")}});
  Table t2("t2", {{"id", Role::kQuantitative}, {"b", Role::kCategorical}},
           {{Value(2), Value("p")}, {Value(3), Value("q")}});
  Table t3("t3", {{"k", Role::kQuantitative}});
  Database db("d", {t1, t2, t3});
  std::vector<std::string> names = {"t1", "t2"};
  std::vector<JoinCondition> on = {{{"t1", "id"}, {"t2", "id"}}};
  Table j = inner_join(db, names, on);
  ASSERT_EQ(j.num_rows(), 1u);
  EXPECT_EQ(j.columns()[0].name, "t1.id");
  EXPECT_EQ(j.columns()[2].name, "t2.id");
  EXPECT_EQ(j.rows()[0], (Row{Value(2), Value("y"), Value(2), Value("p")}));

  std::vector<JoinCondition> none = {{{"t1", "a"}, {"t2", "b"}}};
  EXPECT_EQ(inner_join(db, names, none).num_rows(), 0u);

  std::vector<std::string> three = {"t1", "t2", "t3"};
  EXPECT_THROW(inner_join(db, three, on), DisconnectedJoin);

  Table keyed("k", {{"id", Role::kQuantitative}}, {{Value(1)}, {Value(2)}, {Value(3)}});
  Table keyed2("k2", {{"id", Role::kQuantitative}}, keyed.rows());
  Database kd("k", {keyed, keyed2});
  std::vector<std::string> pair = {"k", "k2"};
  std::vector<JoinCondition> self = {{{"k", "id"}, {"k2", "id"}}};
  EXPECT_EQ(inner_join(kd, pair, self).num_rows(), keyed.num_rows());
}

TEST(GroupAggregate, Examples) {
  Table t("t", {{"k", Role::kCategorical}, {"v", Role::kQuantitative}, {"c", Role::kCategorical}},
          {{Value("a"), Value(1), Value("x")}, {Value("a"), Value(2), Value("x")},
           {Value("b"), Value(3), Value("y")}});
  std::vector<std::string> keys = {"k"};
  Table sum = group_aggregate(t, keys, AggFn::kSum, "v");
  EXPECT_EQ(sum.rows(), (std::vector<Row>{{Value("a"), Value(3)}, {Value("b"), Value(3)}}));
  EXPECT_EQ(sum.columns()[1].name, "sum(v)");
  EXPECT_THROW(group_aggregate(t, keys, AggFn::kSum, "c"), NotQuantitative);

  Table all = group_aggregate(t, {}, AggFn::kMax, "v");
  EXPECT_EQ(all.rows(), (std::vector<Row>{{Value(3)}}));

  Table nulls("t", {{"k", Role::kCategorical}, {"v", Role::kQuantitative}},
              {{Value("a"), Value(2)}, {Value("a"), Value()}});
  EXPECT_EQ(group_aggregate(nulls, keys, AggFn::kAvg, "v").rows(),
            (std::vector<Row>{{Value("a"), Value(2)}}));
  EXPECT_EQ(group_aggregate(nulls, keys, AggFn::kCount, "*").rows(),
            (std::vector<Row>{{Value("a"), Value(2)}}));
}

TEST(ResultCsv, Rendering) {
  ResultTable r;
  r.columns = {{"x", Role::kCategorical}, {"sum(v)", Role::kQuantitative}};
  r.rows = {{Value("a,b"), Value(1.5)}, {Value(), Value(2)}};
  EXPECT_EQ(result_to_csv(r), "x,sum(v)\n\"a,b\",1.5\n,2\n");
}

TEST(EngineOracle, RandomQueriesMatchBruteForce) {
  testing::Rng rng(1234);
  for (int i = 0; i < 400; ++i) {
    Database db = testing::random_database(rng);
    VisQuery v = testing::random_valid_vis(rng, db);
    ASSERT_TRUE(validate(v, db).empty()) << serialize_vega_zero(v);
    ResultTable r = execute(v, db);
    auto expected = testing::brute_force_execute(v, db);
    std::string why;
    EXPECT_TRUE(testing::rows_match(r.rows, expected, v.y.aggregate, 1e-9, &why))
        << serialize_vega_zero(v) << ": " << why;
  }
}

TEST(EngineProperties, CountsConserveFilteredRows) {
  testing::Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    Database db = testing::random_database(rng);
    VisQuery v = testing::random_valid_vis(rng, db);
    v.mark = v.color ? ChartType::kStackedBar : ChartType::kBar;
    v.y = {AggFn::kCount, {"", "*"}};
    v.bin.reset();
    v.sort.reset();
    v.topk.reset();
    const Table* base = db.find_table(*v.data);
    bool quantitative_x = false;
    for (const auto& t : db.tables()) {
      if (auto idx = t.find_column(v.x.column))
        quantitative_x = quantitative_x || t.columns()[*idx].role == Role::kQuantitative;
    }
    if (quantitative_x) continue;
    ASSERT_TRUE(validate(v, db).empty()) << serialize_vega_zero(v);
    ResultTable grouped = execute(v, db);
    double total = 0;
    for (const auto& row : grouped.rows) total += row[1].number();

    VisQuery raw = v;
    raw.mark = ChartType::kScatter;
    raw.color.reset();
    raw.group_x = false;
    raw.y = {AggFn::kNone, {"", base == db.find_table("facts") ? "amount" : "weight"}};
    raw.x = {"", base == db.find_table("facts") ? "score" : "rid"};
    ASSERT_TRUE(validate(raw, db).empty()) << serialize_vega_zero(raw);
    EXPECT_EQ(total, static_cast<double>(execute(raw, db).rows.size()));
  }
}

TEST(EngineProperties, DeterministicOrder) {
  testing::Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    Database db = testing::random_database(rng);
    VisQuery v = testing::random_valid_vis(rng, db);
    EXPECT_EQ(execute(v, db), execute(v, db));
  }
}

TEST(EngineProperties, FilterCommutesWithJoin) {
  // Filtering facts before the join equals filtering the joined rows.
  testing::Rng rng(10);
  for (int i = 0; i < 100; ++i) {
    Database db = testing::random_database(rng);
    VisQuery v = parse_vega_zero(
        "mark bar data facts join regions on facts.id = regions.rid encoding x region y "
        "aggregate sum amount transform filter cat = 'a'");
    const Table* facts = db.find_table("facts");
    Table filtered("facts", facts->columns());
    for (const auto& row : facts->rows()) {
      if (eval_predicate(*facts, row, *v.filter)) filtered.add_row(row);
    }
    Database pre("pre", {filtered, *db.find_table("regions")});
    VisQuery unfiltered = v;
    unfiltered.filter.reset();
    EXPECT_EQ(execute(v, db), execute(unfiltered, pre));
  }
}

}  // namespace
}  // namespace vizforge
