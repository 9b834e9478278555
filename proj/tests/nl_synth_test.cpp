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

#include <algorithm>

#include "support/generators.hpp"
#include "vizforge/error.hpp"
#include "vizforge/nl_synth.hpp"

namespace vizforge {
namespace {

Database world() {
  Table covid("covid19", {{"date", Role::kTemporal},
                          {"country", Role::kCategorical},
                          {"confirmed", Role::kQuantitative},
                          {"deaths", Role::kQuantitative}});
  for (int d = 1; d <= 5; ++d) {
    covid.add_row({Value(Date{2020, 2, d}), Value("China"), Value(100 * d), Value(d)});
    covid.add_row({Value(Date{2020, 3, d}), Value("Italy"), Value(10 * d), Value(0)});
  }
  return Database("world", {std::move(covid)});
}

const ChartCandidate& find(const std::vector<ChartCandidate>& cs, std::string_view vis) {
  VisQuery target = parse_vega_zero(vis);
  auto it = std::find_if(cs.begin(), cs.end(), [&](const ChartCandidate& c) { return c.vis == target; });
  if (it == cs.end()) throw std::runtime_error("no candidate " + std::string(vis));
  return *it;
}

std::vector<std::string> texts(const std::vector<NlVariant>& vs) {
  std::vector<std::string> out;
  for (const auto& v : vs) out.push_back(v.text);
  return out;
}

TEST(ChartPhrase, Table) {
  EXPECT_EQ(chart_phrase(ChartType::kBar), "bar chart");
  EXPECT_EQ(chart_phrase(ChartType::kPie), "pie chart");
  EXPECT_EQ(chart_phrase(ChartType::kLine), "line chart");
  EXPECT_EQ(chart_phrase(ChartType::kScatter), "scatter plot");
  EXPECT_EQ(chart_phrase(ChartType::kStackedBar), "stacked bar chart");
  EXPECT_EQ(chart_phrase(ChartType::kGroupedLine), "line chart");
  EXPECT_EQ(chart_phrase(ChartType::kGroupedScatter), "scatter plot");
}

TEST(ExtractDescription, StripsImperativesAndPunctuation) {
  EXPECT_EQ(extract_description("show me the trend of COVID-19 total confirmed cases in China"),
            "the trend of COVID-19 total confirmed cases in China");
  EXPECT_EQ(extract_description("What are the names of all departments?"), "the names of all departments");
  EXPECT_EQ(extract_description("How many students are in each department?"),
            "the number of students in each department");
  EXPECT_EQ(extract_description("How many countries are there in each continent?"),
            "the number of countries in each continent");
  EXPECT_EQ(extract_description("How many students enrolled on each date?"),
            "the number of students enrolled on each date");
  EXPECT_EQ(extract_description("Please draw a bar chart to show sales by region."), "sales by region");
  EXPECT_EQ(extract_description("Which country has the most cases?"), "which country has the most cases");
  EXPECT_EQ(extract_description("Utah cases per day"), "Utah cases per day");
  EXPECT_EQ(extract_description("?"), "");
}

TEST(SynthesizeNl, TrendInChina) {
  auto cs = synthesize_vis(
      parse_sql("SELECT date, SUM(confirmed) FROM covid19 WHERE country = 'China' GROUP BY date"), world());
  const auto& c = find(cs,
                       "mark line data covid19 encoding x date y aggregate sum confirmed transform filter "
                       "country = 'China' group x");
  auto vs = synthesize_nl("show me the trend of COVID-19 total confirmed cases in China", c);
  EXPECT_EQ(texts(vs), (std::vector<std::string>{
                           "draw a line chart to show the trend of COVID-19 total confirmed cases in China",
                           "can you draw a line chart showing the trend of COVID-19 total confirmed cases in "
                           "China?",
                           "a line chart of the trend of COVID-19 total confirmed cases in China"}));
  for (const auto& v : vs) EXPECT_FALSE(v.rework_flag);
  EXPECT_EQ(vs[0].style, NlStyle::kCommand);
  EXPECT_EQ(vs[1].style, NlStyle::kQuestion);
  EXPECT_EQ(vs[2].style, NlStyle::kCaption);

  const auto& binned = find(cs,
                            "mark line data covid19 encoding x date y aggregate sum confirmed transform filter "
                            "country = 'China' group x bin x by month");
  auto bv = synthesize_nl("show me the trend of COVID-19 total confirmed cases in China", binned);
  ASSERT_EQ(bv.size(), 4u);
  EXPECT_EQ(bv[3].text, "draw a line chart to show the trend of COVID-19 total confirmed cases in China by month");

  const auto& unfiltered = find(cs,
                                "mark line data covid19 encoding x date y aggregate sum confirmed transform "
                                "group x");
  for (const auto& v : synthesize_nl("show me the trend of confirmed cases in China", unfiltered)) {
    EXPECT_TRUE(v.rework_flag);
  }
}

TEST(SynthesizeNl, SortAndLimitDeletionsRemoveTheirSpans) {
  auto cs = synthesize_vis(parse_sql("SELECT country, SUM(deaths) FROM covid19 GROUP BY country ORDER BY "
                                     "SUM(deaths) DESC LIMIT 1"),
                           world());
  const auto& plain = find(cs, "mark bar data covid19 encoding x country y aggregate sum deaths transform group x");
  auto vs = synthesize_nl("List the top 1 countries and their total deaths, ordered by total deaths", plain);
  EXPECT_EQ(vs[0].text, "draw a bar chart to show the countries and their total deaths");
  EXPECT_FALSE(vs[0].rework_flag);

  auto absent = synthesize_nl("List the countries with the highest total deaths", plain);
  for (const auto& v : absent) EXPECT_TRUE(v.rework_flag);

  const auto& kept = find(cs,
                          "mark bar data covid19 encoding x country y aggregate sum deaths transform group x "
                          "sort y desc topk 1");
  auto kv = synthesize_nl("List the top 1 countries and their total deaths, ordered by total deaths", kept);
  EXPECT_EQ(kv[0].text,
            "draw a bar chart to show the top 1 countries and their total deaths, ordered by total deaths");
  EXPECT_FALSE(kv[0].rework_flag);
}

TEST(SynthesizeNl, GroupAndColorPhrases) {
  Table t("items", {{"kind", Role::kCategorical}, {"shop", Role::kCategorical}, {"price", Role::kQuantitative}},
          {{Value("a"), Value("x"), Value(1)}, {Value("b"), Value("y"), Value(2)}});
  Database db("shop", {t});
  auto lone = synthesize_vis(parse_sql("SELECT kind FROM items"), db);
  auto lv = synthesize_nl("What are the kinds of items?", lone.at(0));
  ASSERT_EQ(lv.size(), 4u);
  EXPECT_EQ(lv[3].text, "draw a bar chart to show the kinds of items for each kind");

  auto colored = synthesize_vis(parse_sql("SELECT kind, SUM(price), shop FROM items GROUP BY kind, shop"), db);
  ASSERT_FALSE(colored.empty());
  ASSERT_EQ(colored[0].vis.mark, ChartType::kStackedBar);
  EXPECT_EQ(synthesize_nl("Total price per kind and shop", colored[0])[0].text,
            "draw a stacked bar chart to show Total price per kind and shop colored by shop");
}

TEST(NlTemplates, ParseAndErrors) {
  NlTemplates t = NlTemplates::parse(
      "# house style\n"
      "command.base = plot {description} as a {chart_phrase}\n"
      "\n"
      "caption.bin = {chart_phrase}: {y} per {bin_unit}\n");
  EXPECT_EQ(t.get(NlStyle::kCommand, "base"), "plot {description} as a {chart_phrase}");
  EXPECT_EQ(t.get(NlStyle::kQuestion, "base"), NlTemplates().get(NlStyle::kQuestion, "base"));
  EXPECT_EQ(t.get(NlStyle::kCaption, "bin"), "{chart_phrase}: {y} per {bin_unit}");
  EXPECT_TRUE(t.get(NlStyle::kQuestion, "bin").empty());
  EXPECT_THROW(NlTemplates::parse("command.base draw"), ConfigError);
  EXPECT_THROW(NlTemplates::parse("poem.base = x"), ConfigError);
  EXPECT_THROW(NlTemplates::parse("command.sort = x"), ConfigError);
  EXPECT_THROW(NlTemplates::parse("command.base = {colour}"), ConfigError);
  EXPECT_THROW(NlTemplates::parse("command.base = {description"), ConfigError);
  EXPECT_THROW(NlTemplates::parse("command.base ="), ConfigError);
  EXPECT_THROW(NlTemplates::load("/nonexistent/templates.txt"), ConfigError);
}

TEST(NlSynthProperties, PhraseLiteralsAndRework) {
  testing::Rng rng(5150);
  const std::vector<std::string> sources = {
      "show me the total amount for each cat where cat is a",
      "List kinds and scores in descending order of score",
      "What are the top 3 kinds by amount?",
      "How many facts have score at most 5 for kind x?",
      "amount against score, sorted by amount"};
  const std::vector<std::string> sqls = {
      "SELECT cat, SUM(amount) FROM facts WHERE cat = 'a' GROUP BY cat",
      "SELECT kind, score FROM facts ORDER BY score DESC",
      "SELECT kind, SUM(amount) FROM facts GROUP BY kind ORDER BY SUM(amount) DESC LIMIT 3",
      "SELECT kind, COUNT(*) FROM facts WHERE score <= 5 AND kind = 'x' GROUP BY kind",
      "SELECT amount, score FROM facts ORDER BY amount"};
  std::size_t checked = 0;
  for (int round = 0; round < 20; ++round) {
    Database db = testing::random_database(rng, 30);
    for (std::size_t i = 0; i < sqls.size(); ++i) {
      for (const auto& c : synthesize_vis(parse_sql(sqls[i]), db)) {
        auto vs = synthesize_nl(sources[i], c);
        ASSERT_GE(vs.size(), 3u);
        bool deletions = std::any_of(c.edits.begin(), c.edits.end(), [](const Edit& e) { return e.is_deletion(); });
        std::string head(chart_phrase(c.vis.mark));
        head = head.substr(head.rfind(' ') + 1);
        for (const auto& v : vs) {
          EXPECT_FALSE(v.text.empty());
          EXPECT_NE(v.text.find(head), std::string::npos) << v.text;
          if (!deletions) EXPECT_FALSE(v.rework_flag) << v.text;
          if (c.vis.filter) {
            for (const auto& atom : c.vis.filter->atoms) {
              std::string lit = atom.literal.to_string();
              if (sources[i].find(" " + lit) != std::string::npos) {
                EXPECT_NE(v.text.find(" " + lit), std::string::npos) << v.text;
              }
            }
          }
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 100u);
}

}  // namespace
}  // namespace vizforge
