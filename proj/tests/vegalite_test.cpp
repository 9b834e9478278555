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

#include <cstdlib>
#include <fstream>

#include "support/generators.hpp"
#include "support/paths.hpp"
#include "vizforge/engine.hpp"
#include "vizforge/error.hpp"
#include "vizforge/vegalite.hpp"

namespace vizforge {
namespace {

using json = VegaLiteSpec;

constexpr std::string_view kUtah =
    "mark line data covid encoding x date y aggregate none number color cases transform filter states = 'Utah'";

Database covid_us() {
  Table t("covid", {{"date", Role::kTemporal},
                    {"states", Role::kCategorical},
                    {"cases", Role::kCategorical},
                    {"number", Role::kQuantitative}});
  for (int d = 1; d <= 3; ++d) {
    t.add_row({Value(Date{2020, 3, d}), Value("Utah"), Value("confirmed"), Value(d * 10)});
    t.add_row({Value(Date{2020, 3, d}), Value("Utah"), Value("deaths"), Value(d)});
    t.add_row({Value(Date{2020, 3, d}), Value("Ohio"), Value("confirmed"), Value(d * 7)});
  }
  Table dept("department", {{"dept_name", Role::kCategorical}, {"budget", Role::kQuantitative}},
             {{Value("Physics"), Value(100)}, {Value("Art"), Value(40)}, {Value("Math"), Value(2.5)}});
  return Database("covid_us", {std::move(t), std::move(dept)});
}

void expect_golden(const std::string& name, const std::string& text) {
  auto path = testing::source_path("tests/golden/" + name);
  if (std::getenv("VIZFORGE_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << text;
  }
  EXPECT_EQ(text, testing::read_file(path)) << "golden " << name;
}

TEST(CompileVegaLite, UtahLine) {
  Database db = covid_us();
  json s = compile_vegalite(parse_vega_zero(kUtah), db);
  EXPECT_EQ(s["mark"], "line");
  EXPECT_EQ(s["encoding"]["x"], (json{{"field", "date"}, {"type", "temporal"}}));
  EXPECT_EQ(s["encoding"]["y"], (json{{"field", "number"}, {"type", "quantitative"}}));
  EXPECT_EQ(s["encoding"]["color"], (json{{"field", "cases"}, {"type", "nominal"}}));
  ASSERT_EQ(s["transform"].size(), 1u);
  EXPECT_EQ(s["transform"][0]["filter"], "datum.states == 'Utah'");
  std::vector<std::string> keys;
  for (const auto& [k, _] : s.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"$schema", "data", "transform", "mark", "encoding"}));
  EXPECT_TRUE(check_vegalite(s, &db).empty());
  expect_golden("utah.vl.json", emit_text(s));
}

TEST(CompileVegaLite, MinimalBarCount) {
  Database db = covid_us();
  json s = compile_vegalite(parse_vega_zero("mark bar data covid encoding x states y aggregate count * transform group x"), db);
  EXPECT_EQ(s["mark"], "bar");
  EXPECT_EQ(s["encoding"]["y"]["aggregate"], "count");
  EXPECT_FALSE(s["encoding"].contains("color"));
  EXPECT_FALSE(s.contains("transform"));
  EXPECT_TRUE(check_vegalite(s, &db).empty());
  expect_golden("minimal_bar.vl.json", emit_text(s));
}

TEST(CompileVegaLite, PieUsesThetaAndColor) {
  Database db = covid_us();
  json s = compile_vegalite(
      parse_vega_zero("mark pie data department encoding x dept_name y aggregate sum budget transform group x"), db);
  EXPECT_EQ(s["mark"], "arc");
  EXPECT_EQ(s["encoding"]["theta"], (json{{"field", "budget"}, {"type", "quantitative"}, {"aggregate", "sum"}}));
  EXPECT_EQ(s["encoding"]["color"]["field"], "dept_name");
  EXPECT_FALSE(s["encoding"].contains("x"));
  EXPECT_TRUE(check_vegalite(s, &db).empty());
}

TEST(CompileVegaLite, AggregatesBinsAndSort) {
  Database db = covid_us();
  json s = compile_vegalite(
      parse_vega_zero("mark bar data covid encoding x date y aggregate avg number transform group x bin x by month "
                      "sort y desc"),
      db);
  EXPECT_EQ(s["encoding"]["y"]["aggregate"], "mean");
  EXPECT_EQ(s["encoding"]["x"]["timeUnit"], "yearmonth");
  EXPECT_EQ(s["encoding"]["x"]["sort"], "-y");
  for (auto [unit, vl] : {std::pair{"year", "year"}, {"weekday", "day"}, {"day", "yearmonthdate"}}) {
    json b = compile_vegalite(parse_vega_zero(std::string("mark line data covid encoding x date y aggregate sum number "
                                                          "transform group x bin x by ") + unit),
                              db);
    EXPECT_EQ(b["encoding"]["x"]["timeUnit"], vl);
  }
}

TEST(CompileVegaLite, TopkUsesWindowRank) {
  Database db = covid_us();
  json s = compile_vegalite(
      parse_vega_zero("mark bar data covid encoding x states y aggregate sum number transform group x sort y desc "
                      "topk 1"),
      db);
  const json& t = s["transform"];
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0]["aggregate"][0], (json{{"op", "sum"}, {"field", "number"}, {"as", "sum_number"}}));
  EXPECT_EQ(t[0]["groupby"], json::array({"states"}));
  EXPECT_EQ(t[1]["window"][0]["op"], "row_number");
  EXPECT_EQ(t[1]["sort"][0], (json{{"field", "sum_number"}, {"order", "descending"}}));
  EXPECT_EQ(t[2]["filter"], "datum.rank <= 1");
  EXPECT_EQ(s["encoding"]["y"], (json{{"field", "sum_number"}, {"type", "quantitative"}}));
  EXPECT_TRUE(check_vegalite(s, &db).empty());
}

TEST(FilterExpression, Operators) {
  auto expr = [](CompareOp op, Value lit, Role role) {
    return filter_expression(Comparison{{"", "c"}, op, std::move(lit)}, "c", role);
  };
  EXPECT_EQ(expr(CompareOp::kEq, Value("it's"), Role::kCategorical), "datum.c == 'it\\'s'");
  EXPECT_EQ(expr(CompareOp::kGt, Value(2.5), Role::kQuantitative), "isValid(datum.c) && datum.c > 2.5");
  EXPECT_EQ(expr(CompareOp::kNe, Value("x"), Role::kCategorical), "isValid(datum.c) && datum.c != 'x'");
  EXPECT_EQ(expr(CompareOp::kLike, Value("U%_."), Role::kCategorical),
            "isValid(datum.c) && test(regexp('^U.*.\\\\.$', 'i'), datum.c)");
  EXPECT_EQ(expr(CompareOp::kGe, Value("2020-03"), Role::kTemporal),
            "isValid(datum.c) && time(datum.c) >= time('2020-03-01')");
  EXPECT_EQ(filter_expression(Comparison{{"", "c"}, CompareOp::kEq, Value(1)}, "odd name", Role::kQuantitative),
            "datum['odd name'] == 1");
}

TEST(CompileVegaLite, JoinBecomesLookup) {
  testing::Rng rng(8);
  Database db = testing::random_database(rng, 20);
  json s = compile_vegalite(
      parse_vega_zero("mark bar data facts join regions on facts.id = regions.rid encoding x region y aggregate sum "
                      "amount transform group x"),
      db);
  EXPECT_EQ(s["transform"][0],
            (json{{"lookup", "id"}, {"from", {{"data", {{"name", "regions"}}}, {"key", "rid"}}}, {"as", "join_regions"}}));
  EXPECT_EQ(s["transform"][1]["filter"], "isValid(datum.join_regions)");
  EXPECT_EQ(s["encoding"]["x"]["field"], "join_regions.region");
  EXPECT_TRUE(check_vegalite(s, &db).empty());
}

TEST(CompileVegaLite, InlineRowsEqualEngineResult) {
  Database db = covid_us();
  VisQuery v = parse_vega_zero(kUtah);
  json s = compile_vegalite(v, db, true);
  EXPECT_FALSE(s.contains("transform"));
  ResultTable r = execute(v, db);
  ASSERT_EQ(s["data"]["values"].size(), r.rows.size());
  EXPECT_EQ(s["data"]["values"][0], (json{{"date", "2020-03-01"}, {"number", 10}, {"cases", "confirmed"}}));
  EXPECT_TRUE(check_vegalite(s, &db).empty());
}

TEST(CompileVegaLite, RejectsInvalidQueries) {
  EXPECT_THROW(compile_vegalite(parse_vega_zero("mark bar data nowhere encoding x a y aggregate count *"), covid_us()),
               ExecutionError);
}

TEST(CheckVegaLite, FindsProblems) {
  Database db = covid_us();
  json good = compile_vegalite(parse_vega_zero(kUtah), db);
  EXPECT_FALSE(check_vegalite(json::array(), &db).empty());
  json bad = good;
  bad["mark"] = "pie";
  EXPECT_FALSE(check_vegalite(bad).empty());
  bad = good;
  bad["encoding"].erase("y");
  EXPECT_FALSE(check_vegalite(bad).empty());
  bad = good;
  bad["encoding"]["x"]["type"] = "quantitative";
  EXPECT_TRUE(check_vegalite(bad).empty());  // roles are only known with a database
  EXPECT_FALSE(check_vegalite(bad, &db).empty());
  bad = good;
  bad["encoding"]["x"]["field"] = "dates";
  EXPECT_FALSE(check_vegalite(bad, &db).empty());
  bad = good;
  bad["transform"].push_back({{"explode", true}});
  EXPECT_FALSE(check_vegalite(bad).empty());
}

TEST(VegaLiteProperties, EveryValidQueryCompilesWellFormed) {
  testing::Rng rng(2718);
  for (int i = 0; i < 500; ++i) {
    Database db = testing::random_database(rng, 30);
    VisQuery v = testing::random_valid_vis(rng, db);
    json named;
    ASSERT_NO_THROW(named = compile_vegalite(v, db)) << serialize_vega_zero(v);
    auto problems = check_vegalite(named, &db);
    EXPECT_TRUE(problems.empty()) << serialize_vega_zero(v) << ": " << problems.front();
    EXPECT_EQ(emit_text(named), emit_text(compile_vegalite(v, db)));
    EXPECT_EQ(named.dump().find("null"), std::string::npos);

    json inl = compile_vegalite(v, db, true);
    EXPECT_TRUE(check_vegalite(inl, &db).empty()) << serialize_vega_zero(v);
    ResultTable r = execute(v, db);
    ASSERT_EQ(inl["data"]["values"].size(), r.rows.size());
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
      for (std::size_t c = 0; c < r.columns.size(); ++c) {
        const Value& cell = r.rows[k][c];
        const json& out = inl["data"]["values"][k][r.columns[c].name];
        if (cell.is_null()) {
          EXPECT_TRUE(out.is_null());
        } else if (cell.is_number()) {
          EXPECT_EQ(out.get<double>(), cell.number());
        } else {
          EXPECT_EQ(out.get<std::string>(), cell.to_string());
        }
      }
    }
  }
}

}  // namespace
}  // namespace vizforge
