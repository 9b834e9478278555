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
#include <fstream>
#include <thread>

#include <httplib.h>
#include <unistd.h>

#include "support/paths.hpp"
#include "vizforge/review.hpp"

namespace vizforge {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class ReviewService : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("vizforge_service_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    bench_ = dir_ / "bench.jsonl";
    dbs_ = load_databases(testing::source_path("data/databases"));
    auto corpus = read_source_corpus(testing::source_path("data/corpus.tsv"));
    write_benchmark(bench_, synthesize_benchmark(corpus.pairs, dbs_).pairs);
    start();
  }

  void TearDown() override {
    stop();
    fs::remove_all(dir_);
  }

  void start() {
    store_ = std::make_unique<ReviewStore>(bench_, [] { return std::string("2026-10-14T12:00:00Z"); });
    server_ = std::make_unique<httplib::Server>();
    fs::create_directories(dir_ / "static");
    std::ofstream(dir_ / "static" / "index.html") << "<html>review</html>";
    install_review_routes(*server_, *store_, dbs_, dir_ / "static");
    port_ = server_->bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void stop() {
    if (!server_) return;
    server_->stop();
    thread_.join();
    client_.reset();
    server_.reset();
    store_.reset();
  }

  json get(const std::string& path, int expect = 200) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res) << path;
    if (!res) return {};
    EXPECT_EQ(res->status, expect) << path << ": " << res->body;
    return json::parse(res->body);
  }

  std::pair<int, json> post(const std::string& id, const std::string& body) {
    auto res = client_->Post("/api/pairs/" + id + "/verdict", body, "application/json");
    EXPECT_TRUE(res);
    if (!res) return {0, {}};
    return {res->status, json::parse(res->body)};
  }

  // A pending pair whose variants need no rework, so one good score approves it.
  std::string clean_pending_id() {
    for (const auto& p : *store_->snapshot()) {
      bool rework = std::any_of(p.nl_variants.begin(), p.nl_variants.end(), [](const NlVariant& v) { return v.rework_flag; });
      if (p.status == PairStatus::kPending && !rework) return p.id;
    }
    ADD_FAILURE() << "no clean pending pair in the fixture";
    return {};
  }

  fs::path dir_;
  fs::path bench_;
  std::vector<Database> dbs_;
  std::unique_ptr<ReviewStore> store_;
  std::unique_ptr<httplib::Server> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(ReviewService, ListsAndFetchesPairs) {
  json all = get("/api/pairs?status=pending&limit=3");
  EXPECT_EQ(all["pairs"].size(), 3u);
  EXPECT_EQ(all["total"].get<std::size_t>(), store_->snapshot()->size());
  EXPECT_EQ(get("/api/pairs?status=approved")["total"], 0);
  get("/api/pairs?status=maybe", 400);
  get("/api/pairs?limit=-2", 400);

  std::string id = all["pairs"][0]["id"];
  json pair = get("/api/pairs/" + id);
  EXPECT_EQ(pair["id"], id);
  EXPECT_TRUE(pair["vega_lite"].is_string());
  EXPECT_TRUE(pair["vega_lite_inline"]["data"].contains("values"));
  get("/api/pairs/0123456789abcdef", 404);

  auto res = client_->Get("/index.html");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->body, "<html>review</html>");
}

TEST_F(ReviewService, ApprovalSurvivesRestart) {
  std::string id = clean_pending_id();
  std::size_t pending = get("/api/stats")["status_counts"]["pending"];

  auto [status, body] = post(id, R"({"score": 5, "reviewer": "ana"})");
  EXPECT_EQ(status, 200);
  EXPECT_EQ(body["status"], "approved");
  EXPECT_EQ(body["appended"], true);
  EXPECT_EQ(get("/api/stats")["status_counts"]["pending"].get<std::size_t>(), pending - 1);

  auto [again, repeat] = post(id, R"({"score": 5, "reviewer": "ana"})");
  EXPECT_EQ(again, 200);
  EXPECT_EQ(repeat["appended"], false);
  EXPECT_EQ(repeat["scores"].size(), 1u);

  stop();
  start();
  json pair = get("/api/pairs/" + id);
  EXPECT_EQ(pair["status"], "approved");
  ASSERT_EQ(pair["scores"].size(), 1u);
  EXPECT_EQ(pair["scores"][0], (json{{"pair_id", id}, {"score", 5}, {"reviewer", "ana"}, {"timestamp", "2026-10-14T12:00:00Z"}}));
}

TEST_F(ReviewService, RejectsBadVerdicts) {
  std::string id = clean_pending_id();
  std::string before = testing::read_file(bench_);
  EXPECT_EQ(post(id, R"({"score": 0, "reviewer": "ana"})").first, 422);
  EXPECT_EQ(post(id, R"({"score": 6, "reviewer": "ana"})").first, 422);
  EXPECT_EQ(post(id, R"({"score": "5", "reviewer": "ana"})").first, 422);
  EXPECT_EQ(post(id, R"({"score": 5})").first, 422);
  EXPECT_EQ(post(id, "score=5").first, 400);
  EXPECT_EQ(post("0123456789abcdef", R"({"score": 5, "reviewer": "ana"})").first, 404);
  EXPECT_EQ(testing::read_file(bench_), before);
  EXPECT_EQ(get("/api/pairs/" + id)["status"], "pending");

  auto res = client_->Post("/api/pairs/" + id + "/verdict", httplib::Headers{{"X-Reviewer", "ben"}}, R"({"score": 2})",
                           "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["scores"][0]["reviewer"], "ben");
}

TEST_F(ReviewService, ConflictWhenFileChangesUnderneath) {
  std::string id = clean_pending_id();
  std::string text = testing::read_file(bench_);
  std::ofstream(bench_, std::ios::binary) << text << "\n";  // same pairs, different bytes
  EXPECT_EQ(post(id, R"({"score": 4, "reviewer": "ana"})").first, 409);
  auto [status, body] = post(id, R"({"score": 4, "reviewer": "ana"})");
  EXPECT_EQ(status, 200);
  EXPECT_EQ(body["status"], "approved");
}

TEST_F(ReviewService, StatsApprovalRate) {
  auto snap = store_->snapshot();
  ASSERT_GE(snap->size(), 3u);
  int scores[] = {5, 4, 3};
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(post((*snap)[i].id, json{{"score", scores[i]}, {"reviewer", "ana"}}.dump()).first, 200);
  }
  json stats = get("/api/stats");
  EXPECT_NEAR(stats["approval_rate"].get<double>(), 0.667, 0.001);
  EXPECT_EQ(stats["scored_pairs"], 3);
  EXPECT_EQ(stats["pair_count"].get<std::size_t>(), snap->size());
}

TEST_F(ReviewService, ConcurrentVerdictsAllPersist) {
  auto snap = store_->snapshot();
  std::size_t n = std::min<std::size_t>(snap->size(), 16);
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < n; ++i) {
    workers.emplace_back([this, id = (*snap)[i].id] {
      httplib::Client c("127.0.0.1", port_);
      for (int s = 1; s <= 3; ++s) {
        auto res = c.Post("/api/pairs/" + id + "/verdict", json{{"score", s}, {"reviewer", "crowd"}}.dump(),
                          "application/json");
        EXPECT_TRUE(res && res->status == 200) << (res ? std::to_string(res->status) : httplib::to_string(res.error()));
      }
    });
  }
  for (auto& t : workers) t.join();
  auto reloaded = read_benchmark(bench_);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(reloaded[i].scores.size(), 3u);
    EXPECT_EQ(reloaded[i].status, PairStatus::kRejected);
  }
}

}  // namespace
}  // namespace vizforge
