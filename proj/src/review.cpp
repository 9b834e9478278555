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

#include "vizforge/review.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "vizforge/error.hpp"
#include "vizforge/vegalite.hpp"

namespace vizforge {
namespace {

using json = nlohmann::ordered_json;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw LoadError(LoadError::Kind::kUnreadable, p.string(), 0, "cannot read file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

const BenchmarkPair* find_pair(const std::vector<BenchmarkPair>& pairs, const std::string& id) {
  for (const auto& p : pairs) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

}  // namespace

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ReviewStore::ReviewStore(std::filesystem::path path, Clock clock) : path_(std::move(path)), clock_(std::move(clock)) {
  std::string text = read_all(path_);
  snapshot_ = std::make_shared<const std::vector<BenchmarkPair>>(benchmark_from_text(text));
  disk_hash_ = fnv1a(text);
}

std::shared_ptr<const std::vector<BenchmarkPair>> ReviewStore::snapshot() const {
  std::shared_lock lock(snapshot_mu_);
  return snapshot_;
}

ReviewStore::PostResult ReviewStore::post_verdict(const std::string& id, int score, const std::string& reviewer) {
  std::lock_guard write_lock(write_mu_);
  PostResult result;
  auto current = snapshot();
  const BenchmarkPair* existing = find_pair(*current, id);
  if (!existing) {
    result.kind = PostResult::Kind::kNotFound;
    return result;
  }
  if (score < 1 || score > 5) {
    result.kind = PostResult::Kind::kInvalidScore;
    result.pair = *existing;
    return result;
  }
  for (const auto& v : existing->scores) {
    if (v.reviewer == reviewer && v.score == score) {
      result.pair = *existing;
      return result;
    }
  }

  std::string on_disk;
  try {
    on_disk = read_all(path_);
  } catch (const LoadError&) {
    on_disk.clear();
  }
  if (fnv1a(on_disk) != disk_hash_) {
    try {
      auto reloaded = std::make_shared<const std::vector<BenchmarkPair>>(benchmark_from_text(on_disk));
      std::unique_lock lock(snapshot_mu_);
      snapshot_ = reloaded;
      disk_hash_ = fnv1a(on_disk);
    } catch (const Error&) {
      // keep serving the last good snapshot
    }
    result.kind = PostResult::Kind::kConflict;
    return result;
  }

  auto next = std::make_shared<std::vector<BenchmarkPair>>(*current);
  BenchmarkPair* target = nullptr;
  for (auto& p : *next) {
    if (p.id == id) target = &p;
  }
  target->scores.push_back({id, score, reviewer, clock_()});
  target->status = derive_status(*target);
  write_benchmark(path_, *next);
  disk_hash_ = fnv1a(benchmark_to_text(*next));
  result.appended = true;
  result.pair = *target;
  std::unique_lock lock(snapshot_mu_);
  snapshot_ = std::move(next);
  return result;
}

void install_review_routes(httplib::Server& server, ReviewStore& store, const std::vector<Database>& databases,
                           const std::filesystem::path& static_dir) {
  server.Get("/api/pairs", [&store](const httplib::Request& req, httplib::Response& res) {
    std::optional<PairStatus> status;
    if (req.has_param("status")) {
      status = parse_pair_status(req.get_param_value("status"));
      if (!status) return send_error(res, 400, "unknown status '" + req.get_param_value("status") + "'");
    }
    std::size_t limit = 50;
    if (req.has_param("limit")) {
      try {
        long long l = std::stoll(req.get_param_value("limit"));
        if (l < 0) throw std::invalid_argument("negative");
        limit = static_cast<std::size_t>(l);
      } catch (const std::exception&) {
        return send_error(res, 400, "limit must be a non-negative integer");
      }
    }
    auto snap = store.snapshot();
    json pairs = json::array();
    std::size_t matching = 0;
    for (const auto& p : *snap) {
      if (status && p.status != *status) continue;
      ++matching;
      if (pairs.size() < limit) pairs.push_back(pair_to_json(p));
    }
    send_json(res, 200, {{"total", matching}, {"pairs", pairs}});
  });

  server.Get(R"(/api/pairs/([0-9a-f]+))", [&store, &databases](const httplib::Request& req, httplib::Response& res) {
    auto snap = store.snapshot();
    const BenchmarkPair* p = find_pair(*snap, req.matches[1]);
    if (!p) return send_error(res, 404, "unknown pair");
    json body = pair_to_json(*p);
    for (const auto& db : databases) {
      if (db.id() != p->db_id) continue;
      try {
        body["vega_lite_inline"] = compile_vegalite(parse_vega_zero(p->vis), db, true);
      } catch (const Error& e) {
        body["render_error"] = e.what();
      }
    }
    send_json(res, 200, body);
  });

  server.Post(R"(/api/pairs/([0-9a-f]+)/verdict)", [&store](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const nlohmann::json::parse_error&) {
      return send_error(res, 400, "body is not JSON");
    }
    if (!body.is_object() || !body.contains("score") || !body["score"].is_number_integer()) {
      return send_error(res, 422, "score must be an integer from 1 to 5");
    }
    std::string reviewer = body.contains("reviewer") && body["reviewer"].is_string()
                               ? body["reviewer"].get<std::string>()
                               : req.get_header_value("X-Reviewer");
    if (reviewer.empty()) return send_error(res, 422, "reviewer is required");
    auto r = store.post_verdict(req.matches[1], body["score"].get<int>(), reviewer);
    switch (r.kind) {
      case ReviewStore::PostResult::Kind::kNotFound:
        return send_error(res, 404, "unknown pair");
      case ReviewStore::PostResult::Kind::kInvalidScore:
        return send_error(res, 422, "score must be an integer from 1 to 5");
      case ReviewStore::PostResult::Kind::kConflict:
        return send_error(res, 409, "benchmark file changed on disk; retry");
      case ReviewStore::PostResult::Kind::kOk:
        break;
    }
    json out = pair_to_json(r.pair);
    out["appended"] = r.appended;
    send_json(res, 200, out);
  });

  server.Get("/api/stats", [&store, &databases](const httplib::Request&, httplib::Response& res) {
    auto snap = store.snapshot();
    send_json(res, 200, stats_to_json(compute_stats(*snap, databases)));
  });

  if (!static_dir.empty() && std::filesystem::is_directory(static_dir)) {
    server.set_mount_point("/", static_dir.string());
  }
}

}  // namespace vizforge
