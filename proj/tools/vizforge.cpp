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

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "vizforge/chart_filter.hpp"
#include "vizforge/engine.hpp"
#include "vizforge/error.hpp"
#include "vizforge/pipeline.hpp"
#include "vizforge/review.hpp"
#include "vizforge/vegalite.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kUsage = 1;
constexpr int kDataError = 2;

std::vector<vizforge::Database> load_root(const fs::path& root) {
  std::vector<vizforge::LoadWarning> warnings;
  std::vector<vizforge::Database> dbs;
  if (fs::is_regular_file(root / "schema")) {
    dbs.push_back(vizforge::load_database(root, &warnings));
  } else {
    dbs = vizforge::load_databases(root, &warnings);
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w.file << ":" << w.line << ": " << w.message << "\n";
  return dbs;
}

// The database named by --db, else the only one, else the first that validates the query.
const vizforge::Database& pick_database(const std::vector<vizforge::Database>& dbs, const std::string& id,
                                        const vizforge::VisQuery& v) {
  for (const auto& db : dbs) {
    if (!id.empty() ? db.id() == id : (dbs.size() == 1 || vizforge::validate(v, db).empty())) return db;
  }
  throw vizforge::ExecutionError(id.empty() ? "no database under --db-root fits the query" : "unknown database '" + id + "'");
}

json features_json(const vizforge::VisFeatures& f) {
  json j;
  j["chart"] = vizforge::chart_type_name(f.chart);
  j["n_distinct_x"] = f.n_distinct_x;
  j["n_tuples_rendered"] = f.n_tuples_rendered;
  j["unique_ratio_x"] = f.unique_ratio_x;
  j["y_min"] = f.y_min ? json(*f.y_min) : json(nullptr);
  j["y_max"] = f.y_max ? json(*f.y_max) : json(nullptr);
  j["x_role"] = vizforge::role_name(f.x_role);
  j["correlation_xy"] = f.correlation_xy ? json(*f.correlation_xy) : json(nullptr);
  j["n_series"] = f.n_series;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesize and review visualization benchmark pairs"};
  app.require_subcommand(1);

  std::string corpus, db_root, config, out, skips_out, vis, db_id, bench, static_dir, host = "127.0.0.1";
  bool inline_data = false;
  int port = 8080;

  auto* synth = app.add_subcommand("synth", "Synthesize a benchmark file from an NL/SQL corpus");
  synth->add_option("--corpus", corpus, "Tab-separated db_id, nl, sql records")->required();
  synth->add_option("--db-root", db_root, "Directory of databases")->required();
  synth->add_option("--config", config, "key = value configuration file");
  synth->add_option("--out", out, "Benchmark file to write")->required();
  synth->add_option("--skips", skips_out, "Write skipped sources as JSON lines");

  auto* compile = app.add_subcommand("compile", "Compile a Vega-Zero query to Vega-Lite");
  auto* exec = app.add_subcommand("exec", "Execute a Vega-Zero query and print CSV");
  auto* check = app.add_subcommand("check", "Print chart features and the filter judgment");
  for (auto* sub : {compile, exec, check}) {
    sub->add_option("--vis", vis, "Vega-Zero query")->required();
    sub->add_option("--db-root", db_root, "Database directory")->required();
    sub->add_option("--db", db_id, "Database id when the root holds several");
  }
  compile->add_flag("--inline-data", inline_data, "Embed executed rows");
  check->add_option("--config", config, "Thresholds from a configuration file");

  auto* stats = app.add_subcommand("stats", "Print corpus statistics");
  stats->add_option("--bench", bench, "Benchmark file")->required();
  stats->add_option("--db-root", db_root, "Databases for column-role counts");

  auto* serve = app.add_subcommand("serve", "Run the review service");
  serve->add_option("--bench", bench, "Benchmark file")->required();
  serve->add_option("--db-root", db_root, "Directory of databases")->required();
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("--static", static_dir, "Review UI assets served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*synth) {
      vizforge::PipelineConfig cfg = config.empty() ? vizforge::PipelineConfig{} : vizforge::load_config(config);
      vizforge::Corpus c = vizforge::read_source_corpus(corpus);
      for (const auto& w : c.warnings) std::cerr << "warning: " << corpus << ":" << w.line << ": " << w.message << "\n";
      auto dbs = load_root(db_root);
      auto result = vizforge::synthesize_benchmark(c.pairs, dbs, cfg);
      vizforge::write_benchmark(out, result.pairs);
      if (!skips_out.empty()) {
        std::ofstream s(skips_out);
        for (const auto& k : result.report.skips) {
          s << json{{"index", k.index}, {"db_id", k.db_id}, {"reason", k.reason}, {"detail", k.detail}}.dump() << "\n";
        }
      }
      std::cout << c.pairs.size() << " sources, " << result.pairs.size() << " pairs, "
                << result.report.skips.size() << " skipped\n";
      for (const auto& [reason, n] : result.report.counts()) std::cout << "  skip " << reason << ": " << n << "\n";
      for (const auto& [rule, n] : result.report.filtered_by_rule) std::cout << "  filtered " << rule << ": " << n << "\n";
      return 0;
    }
    if (*compile || *exec || *check) {
      auto dbs = load_root(db_root);
      vizforge::VisQuery v = vizforge::parse_vega_zero(vis);
      const auto& db = pick_database(dbs, db_id, v);
      auto violations = vizforge::validate(v, db);
      if (!violations.empty()) {
        for (const auto& x : violations) std::cerr << "error: " << x.to_string() << ": " << x.message << "\n";
        return kDataError;
      }
      if (*compile) {
        std::cout << vizforge::emit_text(vizforge::compile_vegalite(v, db, inline_data));
      } else if (*exec) {
        std::cout << vizforge::result_to_csv(vizforge::execute(v, db));
      } else {
        vizforge::FilterThresholds t = config.empty() ? vizforge::FilterThresholds{} : vizforge::load_config(config).thresholds;
        auto f = vizforge::extract_features(v, db);
        auto j = vizforge::judge(f, t);
        json reasons = json::array();
        for (const auto& r : j.reasons) reasons.push_back({{"rule", r.rule}, {"text", r.text}});
        json doc = {{"features", features_json(f)}, {"verdict", j.good() ? "good" : "bad"}, {"reasons", reasons}};
        std::cout << doc.dump(2) << "\n";
      }
      return 0;
    }
    if (*stats) {
      auto pairs = vizforge::read_benchmark(bench);
      std::vector<vizforge::Database> dbs;
      if (!db_root.empty()) dbs = load_root(db_root);
      std::cout << vizforge::stats_to_json(vizforge::compute_stats(pairs, dbs)).dump(2) << "\n";
      return 0;
    }
    if (*serve) {
      auto dbs = load_root(db_root);
      vizforge::ReviewStore store(bench);
      httplib::Server server;
      vizforge::install_review_routes(server, store, dbs, static_dir);
      std::cerr << "serving " << bench << " on http://" << host << ":" << port << "\n";
      if (!server.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return kDataError;
      }
      return 0;
    }
  } catch (const vizforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}
