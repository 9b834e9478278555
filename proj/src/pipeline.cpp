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

#include "vizforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "vizforge/error.hpp"
#include "vizforge/sql.hpp"
#include "vizforge/vegalite.hpp"

namespace vizforge {
namespace {

using json = nlohmann::ordered_json;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(LoadError::Kind::kUnreadable, path.string(), 0, "cannot read file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

std::size_t parse_count(const std::string& key, std::string_view text) {
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError("config '" + key + "' expects a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("benchmark record lacks '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("benchmark record has a malformed '") + key + "'");
  }
}

const Database* find_database(const std::vector<Database>& dbs, std::string_view id) {
  for (const auto& db : dbs) {
    if (db.id() == id) return &db;
  }
  return nullptr;
}

struct SourceOutcome {
  std::vector<BenchmarkPair> pairs;
  std::optional<Skip> skip;
  std::map<std::string, std::size_t> filtered;
};

SourceOutcome process_source(std::size_t index, const SourcePair& src, const std::vector<Database>& dbs,
                             const PipelineConfig& config) {
  SourceOutcome out;
  auto skip = [&](std::string reason, std::string detail) {
    out.skip = Skip{index, src.db_id, std::move(reason), std::move(detail)};
    return out;
  };
  const Database* db = find_database(dbs, src.db_id);
  if (!db) return skip("unknown_database", src.db_id);

  std::vector<ChartCandidate> candidates;
  try {
    candidates = synthesize_vis(parse_sql(src.sql), *db, config.synthesis);
  } catch (const SyntaxError& e) {
    return skip("syntax_error", e.what());
  } catch (const UnsupportedSql& e) {
    return skip("unsupported_sql", e.construct());
  } catch (const UnknownIdentifier& e) {
    return skip("unknown_identifier", e.what());
  } catch (const TooManyColumns& e) {
    return skip("too_many_columns", e.what());
  } catch (const InvariantViolation& e) {
    return skip("invalid_sql", e.what());
  }
  if (candidates.empty()) return skip("no_candidates", "no chart type fits the result columns");

  for (const auto& c : candidates) {
    Judgment j = judge(extract_features(c.vis, *db), config.thresholds);
    if (!j.good()) {
      for (const auto& r : j.reasons) ++out.filtered[r.rule];
      continue;
    }
    BenchmarkPair p;
    p.db_id = src.db_id;
    p.vis = serialize_vega_zero(c.vis);
    p.vega_lite = emit_text(compile_vegalite(c.vis, *db));
    p.nl_variants = synthesize_nl(src.nl, c, config.templates);
    p.chart = c.vis.mark;
    for (const auto& e : c.edits) p.edits.push_back(e.to_string());
    p.source = src;
    p.id = pair_id(p.db_id, p.vis, p.nl_variants);
    p.status = derive_status(p);
    out.pairs.push_back(std::move(p));
  }
  if (out.pairs.empty()) {
    std::string rules;
    for (const auto& [rule, _] : out.filtered) rules += (rules.empty() ? "" : ",") + rule;
    return skip("all_filtered", rules);
  }
  return out;
}

}  // namespace

Corpus parse_source_corpus(std::string_view text) {
  Corpus c;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.emplace_back(trim(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start)));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3) {
      c.warnings.push_back({i + 1, "expected 3 tab-separated fields, found " + std::to_string(fields.size())});
      continue;
    }
    if (std::any_of(fields.begin(), fields.end(), [](const std::string& f) { return f.empty(); })) {
      c.warnings.push_back({i + 1, "empty field"});
      continue;
    }
    c.pairs.push_back({fields[0], fields[1], fields[2]});
  }
  return c;
}

Corpus read_source_corpus(const std::filesystem::path& path) { return parse_source_corpus(read_text(path)); }

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  PipelineConfig cfg;
  std::map<std::string, std::string> thresholds;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(i + 1) + ": expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    const auto& rules = filter_rules();
    if (key == "templates") {
      cfg.templates = NlTemplates::load(base_dir / value);
    } else if (key == "workers") {
      cfg.workers = std::max<std::size_t>(1, parse_count(key, value));
    } else if (key == "bin_units") {
      cfg.synthesis.bin_units.clear();
      std::stringstream ss(value);
      for (std::string unit; std::getline(ss, unit, ',');) {
        auto u = parse_time_unit(trim(unit));
        if (!u) throw ConfigError("config line " + std::to_string(i + 1) + ": unknown bin unit '" + unit + "'");
        cfg.synthesis.bin_units.push_back(*u);
      }
    } else if (std::find(rules.begin(), rules.end(), key) != rules.end()) {
      thresholds[key] = value;
    } else {
      throw ConfigError("config line " + std::to_string(i + 1) + ": unknown key '" + key + "'");
    }
  }
  cfg.thresholds = FilterThresholds::from_config(thresholds);
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const LoadError&) {
    throw ConfigError("cannot read config file " + path.string());
  }
  return parse_config(text, path.parent_path());
}

std::string_view pair_status_name(PairStatus s) {
  switch (s) {
    case PairStatus::kPending:
      return "pending";
    case PairStatus::kApproved:
      return "approved";
    case PairStatus::kRejected:
      return "rejected";
  }
  return "pending";
}

std::optional<PairStatus> parse_pair_status(std::string_view text) {
  for (PairStatus s : {PairStatus::kPending, PairStatus::kApproved, PairStatus::kRejected}) {
    if (text == pair_status_name(s)) return s;
  }
  return std::nullopt;
}

std::string pair_id(std::string_view db_id, std::string_view vis, const std::vector<NlVariant>& variants) {
  std::vector<std::string> texts;
  for (const auto& v : variants) texts.push_back(v.text);
  std::sort(texts.begin(), texts.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  mix(db_id);
  mix("\x1f");
  mix(vis);
  for (const auto& t : texts) {
    mix("\x1e");
    mix(t);
  }
  return hex64(h);
}

PairStatus derive_status(const BenchmarkPair& p) {
  if (p.scores.empty()) return PairStatus::kPending;
  bool rework = std::any_of(p.nl_variants.begin(), p.nl_variants.end(), [](const NlVariant& v) { return v.rework_flag; });
  int best = 0;
  for (const auto& v : p.scores) best = std::max(best, v.score);
  if (best < 4) return PairStatus::kRejected;
  return rework ? PairStatus::kPending : PairStatus::kApproved;
}

json pair_to_json(const BenchmarkPair& p) {
  json j;
  j["id"] = p.id;
  j["db_id"] = p.db_id;
  j["vis"] = p.vis;
  j["vega_lite"] = p.vega_lite;
  json variants = json::array();
  for (const auto& v : p.nl_variants) {
    variants.push_back({{"text", v.text}, {"style", nl_style_name(v.style)}, {"rework_flag", v.rework_flag}});
  }
  j["nl_variants"] = variants;
  j["chart"] = chart_type_name(p.chart);
  j["edits"] = p.edits;
  j["source"] = {{"db_id", p.source.db_id}, {"nl", p.source.nl}, {"sql", p.source.sql}};
  j["status"] = pair_status_name(p.status);
  json scores = json::array();
  for (const auto& v : p.scores) {
    scores.push_back({{"pair_id", v.pair_id}, {"score", v.score}, {"reviewer", v.reviewer}, {"timestamp", v.timestamp}});
  }
  j["scores"] = scores;
  return j;
}

BenchmarkPair pair_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("benchmark record is not an object");
  BenchmarkPair p;
  p.id = field<std::string>(j, "id");
  p.db_id = field<std::string>(j, "db_id");
  p.vis = field<std::string>(j, "vis");
  p.vega_lite = field<std::string>(j, "vega_lite");
  for (const auto& v : field<json>(j, "nl_variants")) {
    NlVariant nv;
    nv.text = field<std::string>(v, "text");
    std::string style = field<std::string>(v, "style");
    bool known = false;
    for (NlStyle s : {NlStyle::kCommand, NlStyle::kQuestion, NlStyle::kCaption}) {
      if (style == nl_style_name(s)) {
        nv.style = s;
        known = true;
      }
    }
    if (!known) throw ConfigError("benchmark record has unknown style '" + style + "'");
    nv.rework_flag = field<bool>(v, "rework_flag");
    p.nl_variants.push_back(std::move(nv));
  }
  auto chart = parse_chart_type(field<std::string>(j, "chart"));
  if (!chart) throw ConfigError("benchmark record has unknown chart type");
  p.chart = *chart;
  p.edits = field<std::vector<std::string>>(j, "edits");
  json src = field<json>(j, "source");
  p.source = {field<std::string>(src, "db_id"), field<std::string>(src, "nl"), field<std::string>(src, "sql")};
  auto status = parse_pair_status(field<std::string>(j, "status"));
  if (!status) throw ConfigError("benchmark record has unknown status");
  p.status = *status;
  for (const auto& v : field<json>(j, "scores")) {
    p.scores.push_back({field<std::string>(v, "pair_id"), field<int>(v, "score"), field<std::string>(v, "reviewer"),
                        field<std::string>(v, "timestamp")});
  }
  return p;
}

std::string benchmark_to_text(const std::vector<BenchmarkPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) out += pair_to_json(p).dump() + "\n";
  return out;
}

std::vector<BenchmarkPair> benchmark_from_text(std::string_view text) {
  std::vector<BenchmarkPair> pairs;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("benchmark line " + std::to_string(i + 1) + ": " + e.what());
    }
    pairs.push_back(pair_from_json(j));
  }
  return pairs;
}

std::vector<BenchmarkPair> read_benchmark(const std::filesystem::path& path) {
  return benchmark_from_text(read_text(path));
}

void write_benchmark(const std::filesystem::path& path, const std::vector<BenchmarkPair>& pairs) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError(LoadError::Kind::kUnreadable, tmp.string(), 0, "cannot write file");
    out << benchmark_to_text(pairs);
    out.flush();
    if (!out) throw LoadError(LoadError::Kind::kUnreadable, tmp.string(), 0, "write failed");
  }
  std::filesystem::rename(tmp, path);
}

std::map<std::string, std::size_t> SkipReport::counts() const {
  std::map<std::string, std::size_t> c;
  for (const auto& s : skips) ++c[s.reason];
  return c;
}

BenchmarkResult synthesize_benchmark(const std::vector<SourcePair>& corpus, const std::vector<Database>& databases,
                                     const PipelineConfig& config) {
  std::vector<SourceOutcome> outcomes(corpus.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < corpus.size(); i = next++) {
      outcomes[i] = process_source(i, corpus[i], databases, config);
    }
  };
  std::size_t n = std::min(std::max<std::size_t>(1, config.workers), std::max<std::size_t>(1, corpus.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
    work();
  }

  BenchmarkResult result;
  std::set<std::string> seen;
  for (auto& o : outcomes) {
    if (o.skip) result.report.skips.push_back(*o.skip);
    for (const auto& [rule, k] : o.filtered) result.report.filtered_by_rule[rule] += k;
    for (auto& p : o.pairs) {
      if (seen.insert(p.id).second) result.pairs.push_back(std::move(p));
    }
  }
  return result;
}

double RoleShare::share(Role r) const {
  if (total() == 0) return 0;
  std::size_t k = r == Role::kCategorical ? categorical : r == Role::kTemporal ? temporal : quantitative;
  return static_cast<double>(k) / static_cast<double>(total());
}

double CorpusStats::approval_rate() const {
  return scored_pairs == 0 ? 0 : static_cast<double>(approved_by_score) / static_cast<double>(scored_pairs);
}

CorpusStats compute_stats(const std::vector<BenchmarkPair>& pairs, const std::vector<Database>& databases) {
  CorpusStats s;
  s.pair_count = pairs.size();
  for (ChartType ct : kAllChartTypes) s.chart_histogram[std::string(chart_type_name(ct))] = 0;
  for (PairStatus st : {PairStatus::kPending, PairStatus::kApproved, PairStatus::kRejected}) {
    s.status_counts[std::string(pair_status_name(st))] = 0;
  }
  std::set<std::string> referenced;
  for (const auto& p : pairs) {
    ++s.chart_histogram[std::string(chart_type_name(p.chart))];
    ++s.pairs_per_database[p.db_id];
    ++s.status_counts[std::string(pair_status_name(p.status))];
    referenced.insert(p.db_id);
    if (p.scores.empty()) continue;
    ++s.scored_pairs;
    int best = 0;
    for (const auto& v : p.scores) best = std::max(best, v.score);
    if (best >= 4) ++s.approved_by_score;
  }
  for (const auto& db : databases) {
    if (!pairs.empty() && !referenced.count(db.id())) continue;
    for (const auto& t : db.tables()) {
      for (const auto& c : t.columns()) {
        switch (c.role) {
          case Role::kCategorical:
            ++s.roles.categorical;
            break;
          case Role::kTemporal:
            ++s.roles.temporal;
            break;
          case Role::kQuantitative:
            ++s.roles.quantitative;
            break;
        }
      }
    }
  }
  return s;
}

json stats_to_json(const CorpusStats& s) {
  json j;
  j["pair_count"] = s.pair_count;
  j["chart_histogram"] = s.chart_histogram;
  j["role_counts"] = {{"categorical", s.roles.categorical},
                      {"temporal", s.roles.temporal},
                      {"quantitative", s.roles.quantitative}};
  j["role_proportions"] = {{"categorical", s.roles.share(Role::kCategorical)},
                           {"temporal", s.roles.share(Role::kTemporal)},
                           {"quantitative", s.roles.share(Role::kQuantitative)}};
  j["pairs_per_database"] = s.pairs_per_database;
  j["status_counts"] = s.status_counts;
  j["scored_pairs"] = s.scored_pairs;
  j["approval_rate"] = s.approval_rate();
  return j;
}

}  // namespace vizforge
