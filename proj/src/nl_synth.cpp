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

#include "vizforge/nl_synth.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "vizforge/engine.hpp"
#include "vizforge/error.hpp"

namespace vizforge {
namespace {

constexpr std::array<std::string_view, 3> kKinds = {"base", "bin", "group"};
constexpr std::array<std::string_view, 5> kPlaceholders = {"chart_phrase", "description", "x", "y",
                                                           "bin_unit"};

std::string key_of(NlStyle style, std::string_view kind) {
  return std::string(nl_style_name(style)) + "." + std::string(kind);
}

void check_placeholders(const std::string& key, std::string_view tmpl) {
  std::size_t pos = 0;
  while ((pos = tmpl.find('{', pos)) != std::string_view::npos) {
    std::size_t end = tmpl.find('}', pos);
    if (end == std::string_view::npos) throw ConfigError("template '" + key + "': unclosed '{'");
    std::string_view name = tmpl.substr(pos + 1, end - pos - 1);
    if (std::find(kPlaceholders.begin(), kPlaceholders.end(), name) == kPlaceholders.end()) {
      throw ConfigError("template '" + key + "': unknown placeholder {" + std::string(name) + "}");
    }
    pos = end + 1;
  }
}

std::string fill(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values) {
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    std::size_t open = tmpl.find('{', pos);
    if (open == std::string_view::npos) break;
    std::size_t close = tmpl.find('}', open);
    out.append(tmpl.substr(pos, open - pos));
    auto it = values.find(tmpl.substr(open + 1, close - open - 1));
    out += it->second;
    pos = close + 1;
  }
  if (pos < tmpl.size()) out.append(tmpl.substr(pos));
  return out;
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::string join_words(const std::vector<std::string>& words, std::size_t from = 0) {
  std::string out;
  for (std::size_t i = from; i < words.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += words[i];
  }
  return out;
}

// Lowercase with surrounding punctuation removed.
std::string word_key(std::string_view w) {
  std::size_t b = 0;
  std::size_t e = w.size();
  while (b < e && !std::isalnum(static_cast<unsigned char>(w[b]))) ++b;
  while (e > b && !std::isalnum(static_cast<unsigned char>(w[e - 1]))) --e;
  return to_lower(w.substr(b, e - b));
}

bool in(std::string_view w, std::initializer_list<std::string_view> set) {
  return std::find(set.begin(), set.end(), w) != set.end();
}

bool is_number_word(std::string_view w) {
  if (!w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    return true;
  }
  return in(w, {"one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"});
}

bool mentions_literal(const std::vector<std::string>& words, std::size_t b, std::size_t e,
                      const std::vector<std::string>& literals) {
  std::string span = to_lower(join_words(std::vector<std::string>(words.begin() + b, words.begin() + e)));
  return std::any_of(literals.begin(), literals.end(),
                     [&](const std::string& lit) { return !lit.empty() && span.find(lit) != std::string::npos; });
}

// Removes words [b, e) and drops a comma left dangling at the end.
void erase_span(std::vector<std::string>& words, std::size_t b, std::size_t e) {
  words.erase(words.begin() + b, words.begin() + e);
  if (b == words.size() && b > 0) {
    while (!words.back().empty() && words.back().back() == ',') words.back().pop_back();
  }
}

// `in descending order of x`, `sorted by x`, `ranked by x`, up to the next comma.
bool remove_sort_span(std::vector<std::string>& words, const std::vector<std::string>& literals) {
  for (std::size_t k = 0; k < words.size(); ++k) {
    if (!in(word_key(words[k]), {"order", "ordered", "sorted", "ranked", "sort"})) continue;
    std::size_t b = k;
    if (b > 0 && in(word_key(words[b - 1]),
                    {"ascending", "descending", "alphabetical", "increasing", "decreasing", "reverse"})) {
      --b;
    }
    if (b > 0 && in(word_key(words[b - 1]), {"in", "by"})) --b;
    if (b > 0 && in(word_key(words[b - 1]), {"and", "then"})) --b;
    std::size_t e = k + 1;
    if (!words[k].ends_with(',')) {
      while (e < words.size() && !words[e].ends_with(',')) ++e;
      if (e < words.size()) ++e;
    }
    if (mentions_literal(words, b, e, literals)) return false;
    erase_span(words, b, e);
    return true;
  }
  return false;
}

// `top 5`, `first three`, `only 2`.
bool remove_limit_span(std::vector<std::string>& words, const std::vector<std::string>& literals) {
  for (std::size_t k = 0; k + 1 < words.size(); ++k) {
    if (!in(word_key(words[k]), {"top", "first", "only"})) continue;
    if (!is_number_word(word_key(words[k + 1]))) continue;
    if (mentions_literal(words, k, k + 2, literals)) return false;
    bool comma = words[k + 1].ends_with(',');
    words.erase(words.begin() + k, words.begin() + k + 2);
    if (comma && k > 0) words[k - 1] += ',';
    return true;
  }
  return false;
}

std::vector<std::string> filter_literals(const VisQuery& v) {
  std::vector<std::string> out;
  if (!v.filter) return out;
  for (const auto& atom : v.filter->atoms) out.push_back(to_lower(atom.literal.to_string()));
  return out;
}

}  // namespace

std::string_view nl_style_name(NlStyle style) {
  switch (style) {
    case NlStyle::kCommand:
      return "command";
    case NlStyle::kQuestion:
      return "question";
    case NlStyle::kCaption:
      return "caption";
  }
  return "command";
}

NlTemplates::NlTemplates() {
  entries_ = {
      {"command.base", "draw a {chart_phrase} to show {description}"},
      {"question.base", "can you draw a {chart_phrase} showing {description}?"},
      {"caption.base", "a {chart_phrase} of {description}"},
      {"command.bin", "draw a {chart_phrase} to show {description} by {bin_unit}"},
      {"command.group", "draw a {chart_phrase} to show {description} for each {x}"},
  };
}

NlTemplates NlTemplates::parse(std::string_view text) {
  NlTemplates t;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("templates line " + std::to_string(line_no) + ": expected 'style.kind = template'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    std::size_t dot = key.find('.');
    bool known_style = false;
    for (NlStyle s : {NlStyle::kCommand, NlStyle::kQuestion, NlStyle::kCaption}) {
      known_style = known_style || key.substr(0, dot) == nl_style_name(s);
    }
    if (dot == std::string::npos || !known_style ||
        std::find(kKinds.begin(), kKinds.end(), std::string_view(key).substr(dot + 1)) == kKinds.end()) {
      throw ConfigError("templates line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (value.empty()) throw ConfigError("templates line " + std::to_string(line_no) + ": empty template");
    check_placeholders(key, value);
    t.entries_[key] = value;
  }
  return t;
}

NlTemplates NlTemplates::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read templates file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const std::string& NlTemplates::get(NlStyle style, std::string_view kind) const {
  static const std::string empty;
  auto it = entries_.find(key_of(style, kind));
  return it == entries_.end() ? empty : it->second;
}

std::string_view chart_phrase(ChartType ct) {
  switch (without_color(ct)) {
    case ChartType::kBar:
      return ct == ChartType::kStackedBar ? "stacked bar chart" : "bar chart";
    case ChartType::kPie:
      return "pie chart";
    case ChartType::kLine:
      return "line chart";
    default:
      return "scatter plot";
  }
}

std::string extract_description(std::string_view source_nl) {
  std::vector<std::string> words = split_words(source_nl);
  if (!words.empty()) {
    std::string& last = words.back();
    while (!last.empty() && in(std::string_view(&last.back(), 1), {"?", ".", "!"})) last.pop_back();
    if (last.empty()) words.pop_back();
  }
  std::size_t at = 0;
  auto key = [&](std::size_t i) { return i < words.size() ? word_key(words[i]) : std::string(); };
  bool stripped = true;
  while (stripped && at < words.size()) {
    stripped = false;
    std::string w = key(at);
    if (w == "please") {
      ++at;
      stripped = true;
    } else if (in(w, {"show", "give", "tell"}) && key(at + 1) == "me") {
      at += 2;
      stripped = true;
    } else if (in(w, {"show", "list", "find", "display", "return", "draw", "plot", "visualize", "get"})) {
      ++at;
      stripped = true;
    } else if (w == "what" && in(key(at + 1), {"is", "are"})) {
      at += 2;
      stripped = true;
    } else if (in(w, {"a", "an"}) &&
               in(key(at + 1), {"bar", "pie", "line", "scatter", "stacked", "chart", "plot"})) {
      std::size_t j = at + 1;
      while (j < words.size() && !in(key(j), {"chart", "plot", "graph"})) ++j;
      if (j >= words.size() || j > at + 4) break;
      at = j + 1;
      if (key(at) == "to" && key(at + 1) == "show") {
        at += 2;
      } else if (in(key(at), {"of", "showing", "for", "about"})) {
        ++at;
      }
      stripped = true;
    }
  }
  if (at < words.size() && key(at) == "how" && key(at + 1) == "many") {
    words[at + 1] = "the number of";
    ++at;
    // "how many x are there in y" -> "the number of x in y"
    for (std::size_t j = at + 2; j < std::min(words.size(), at + 6); ++j) {
      if (!in(key(j), {"are", "is", "were", "was"})) continue;
      bool comma = words[j].ends_with(',');
      std::size_t n = key(j + 1) == "there" ? 2 : 1;
      if (n == 2) comma = words[j + 1].ends_with(',');
      words.erase(words.begin() + j, words.begin() + j + n);
      if (comma) words[j - 1] += ',';
      break;
    }
  }
  if (at == words.size()) return join_words(words);
  std::string& first = words[at];
  if (in(word_key(first), {"which", "who", "where", "when", "what", "how", "the", "for", "in", "each", "all",
                           "list", "find"})) {
    first[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(first[0])));
  }
  return join_words(words, at);
}

std::vector<NlVariant> synthesize_nl(std::string_view source_nl, const ChartCandidate& c,
                                     const NlTemplates& templates) {
  std::vector<std::string> words = split_words(extract_description(source_nl));
  std::vector<std::string> literals = filter_literals(c.vis);
  bool rework = false;
  bool has_bin = false;
  bool has_group = false;
  for (const auto& e : c.edits) {
    has_bin = has_bin || e.kind == Edit::Kind::kInsertBin;
    has_group = has_group || e.kind == Edit::Kind::kInsertGroup;
    if (!e.is_deletion()) continue;
    if (e.branch == "sort") {
      rework = rework || !remove_sort_span(words, literals);
    } else if (e.branch == "limit") {
      rework = rework || !remove_limit_span(words, literals);
    } else {
      rework = true;
    }
  }
  std::string description = join_words(words);
  if (description.empty()) {
    description = c.vis.y.aggregate == AggFn::kNone ? c.vis.y.column.column : y_column_name(c.vis.y);
  }
  if (c.vis.color) description += " colored by " + c.vis.color->column;

  std::map<std::string, std::string, std::less<>> values = {
      {"chart_phrase", std::string(chart_phrase(c.vis.mark))},
      {"description", description},
      {"x", c.vis.x.column},
      {"y", c.vis.y.column.column == "*" ? "number of records" : c.vis.y.column.column},
      {"bin_unit", c.vis.bin ? std::string(time_unit_name(*c.vis.bin)) : std::string()},
  };
  std::vector<NlVariant> out;
  auto add = [&](NlStyle style, std::string_view kind) {
    const std::string& tmpl = templates.get(style, kind);
    if (tmpl.empty()) return;
    out.push_back({fill(tmpl, values), style, rework});
  };
  for (NlStyle s : {NlStyle::kCommand, NlStyle::kQuestion, NlStyle::kCaption}) add(s, "base");
  for (NlStyle s : {NlStyle::kCommand, NlStyle::kQuestion, NlStyle::kCaption}) {
    if (has_bin) add(s, "bin");
    if (has_group) add(s, "group");
  }
  return out;
}

}  // namespace vizforge
