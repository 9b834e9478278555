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
#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "vizforge/database.hpp"
#include "vizforge/pipeline.hpp"

namespace httplib {
class Server;
}

namespace vizforge {

/// Current UTC time as `YYYY-MM-DDTHH:MM:SSZ`.
std::string utc_timestamp();

/// A benchmark file plus the verdicts posted against it. Readers get immutable
/// snapshots; writers are serialized and persist before publishing.
class ReviewStore {
 public:
  using Clock = std::function<std::string()>;

  /// Throws LoadError or ConfigError when the file cannot be read.
  explicit ReviewStore(std::filesystem::path path, Clock clock = utc_timestamp);

  std::shared_ptr<const std::vector<BenchmarkPair>> snapshot() const;

  struct PostResult {
    enum class Kind { kOk, kNotFound, kInvalidScore, kConflict };
    Kind kind = Kind::kOk;
    bool appended = false;  // false for a repeat of a verdict already recorded
    BenchmarkPair pair;
  };

  /// Appends a verdict and rewrites the file. A verdict with the same reviewer
  /// and score as an existing one is a no-op. If the file changed on disk since
  /// it was last read or written, nothing is written, the store reloads and the
  /// result is kConflict.
  PostResult post_verdict(const std::string& id, int score, const std::string& reviewer);

 private:
  std::filesystem::path path_;
  Clock clock_;
  mutable std::shared_mutex snapshot_mu_;
  std::shared_ptr<const std::vector<BenchmarkPair>> snapshot_;
  std::mutex write_mu_;
  std::uint64_t disk_hash_ = 0;
};

/// Routes for the review API on `server`. Static files under static_dir (when
/// it exists) are served at `/`.
void install_review_routes(httplib::Server& server, ReviewStore& store, const std::vector<Database>& databases,
                           const std::filesystem::path& static_dir = {});

}  // namespace vizforge
