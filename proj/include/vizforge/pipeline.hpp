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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vizforge/chart_filter.hpp"
#include "vizforge/database.hpp"
#include "vizforge/nl_synth.hpp"
#include "vizforge/synthesizer.hpp"

namespace vizforge {

struct SourcePair {
  std::string db_id;
  std::string nl;
  std::string sql;

  bool operator==(const SourcePair&) const = default;
};

struct CorpusWarning {
  std::size_t line = 0;
  std::string message;
};

struct Corpus {
  std::vector<SourcePair> pairs;
  std::vector<CorpusWarning> warnings;
};

/// One `db_id \t nl \t sql` record per line. Blank lines are ignored; lines
/// with a missing or empty field become warnings.
Corpus parse_source_corpus(std::string_view text);
/// Throws LoadError(kUnreadable) when the file cannot be read.
Corpus read_source_corpus(const std::filesystem::path& path);

struct PipelineConfig {
  FilterThresholds thresholds;
  NlTemplates templates;
  SynthesisOptions synthesis;
  std::size_t workers = 4;
};

/// Flat `key = value` lines, `#` comments. Keys: the filter rule identifiers,
/// `templates` (a path, relative to base_dir), `bin_units` (comma separated)
/// and `workers`. Throws ConfigError.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

enum class PairStatus { kPending, kApproved, kRejected };

std::string_view pair_status_name(PairStatus s);
std::optional<PairStatus> parse_pair_status(std::string_view text);

struct Verdict {
  std::string pair_id;
  int score = 0;  // 1..5
  std::string reviewer;
  std::string timestamp;  // ISO 8601, UTC

  bool operator==(const Verdict&) const = default;
};

struct BenchmarkPair {
  std::string id;
  std::string db_id;
  std::string vis;        // canonical Vega-Zero
  std::string vega_lite;  // emitted document text, named data
  std::vector<NlVariant> nl_variants;
  ChartType chart = ChartType::kBar;
  std::vector<std::string> edits;
  SourcePair source;
  PairStatus status = PairStatus::kPending;
  std::vector<Verdict> scores;

  bool operator==(const BenchmarkPair&) const = default;
};

/// FNV-1a 64 over the database id, vis text and sorted variant texts, as 16 hex digits.
std::string pair_id(std::string_view db_id, std::string_view vis, const std::vector<NlVariant>& variants);

/// Approved when some score is at least 4 and no variant needs rework,
/// rejected when every score is below 4, pending otherwise.
PairStatus derive_status(const BenchmarkPair& p);

nlohmann::ordered_json pair_to_json(const BenchmarkPair& p);
/// Throws ConfigError on a record that does not have the expected shape.
BenchmarkPair pair_from_json(const nlohmann::ordered_json& j);

/// One JSON record per line.
std::string benchmark_to_text(const std::vector<BenchmarkPair>& pairs);
std::vector<BenchmarkPair> benchmark_from_text(std::string_view text);
std::vector<BenchmarkPair> read_benchmark(const std::filesystem::path& path);
/// Writes a sibling temporary file and renames it over `path`.
void write_benchmark(const std::filesystem::path& path, const std::vector<BenchmarkPair>& pairs);

struct Skip {
  std::size_t index = 0;  // position in the corpus
  std::string db_id;
  std::string reason;  // e.g. `unsupported_sql`, `all_filtered`
  std::string detail;
};

struct SkipReport {
  std::vector<Skip> skips;
  std::map<std::string, std::size_t> filtered_by_rule;  // rejected candidates per rule

  std::map<std::string, std::size_t> counts() const;
};

struct BenchmarkResult {
  std::vector<BenchmarkPair> pairs;
  SkipReport report;
};

/// Sources are processed by config.workers threads and merged in corpus order.
/// Pairs with an id already produced are dropped.
BenchmarkResult synthesize_benchmark(const std::vector<SourcePair>& corpus,
                                     const std::vector<Database>& databases,
                                     const PipelineConfig& config = {});

struct RoleShare {
  std::size_t categorical = 0;
  std::size_t temporal = 0;
  std::size_t quantitative = 0;

  std::size_t total() const { return categorical + temporal + quantitative; }
  double share(Role r) const;
};

struct CorpusStats {
  std::size_t pair_count = 0;
  std::map<std::string, std::size_t> chart_histogram;  // every chart type, by name
  RoleShare roles;
  std::map<std::string, std::size_t> pairs_per_database;
  std::map<std::string, std::size_t> status_counts;
  std::size_t scored_pairs = 0;
  std::size_t approved_by_score = 0;  // scored pairs whose best score is at least 4

  /// approved_by_score / scored_pairs, 0 when nothing is scored.
  double approval_rate() const;
};

/// Column roles are counted over the databases the pairs reference, or over
/// all of them when there are no pairs.
CorpusStats compute_stats(const std::vector<BenchmarkPair>& pairs, const std::vector<Database>& databases);
nlohmann::ordered_json stats_to_json(const CorpusStats& s);

}  // namespace vizforge
