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

// Column resolution over a query's base relation: the bound table followed by
// each joined table, all columns kept and remembered with their source table.

#include <optional>
#include <string>
#include <vector>

#include "vizforge/database.hpp"
#include "vizforge/predicate.hpp"
#include "vizforge/vega_zero.hpp"

namespace vizforge::detail {

struct ScopeColumn {
  std::string table;
  std::string name;
  Role role;
};

struct ScopeTable {
  const Table* table = nullptr;
  std::size_t offset = 0;  // position of its first column in the scope
};

class Scope {
 public:
  /// Tables in join order; the caller guarantees they exist.
  explicit Scope(std::vector<const Table*> tables);

  const std::vector<ScopeColumn>& columns() const { return columns_; }
  const std::vector<ScopeTable>& tables() const { return tables_; }

  enum class Lookup { kFound, kMissing, kAmbiguous };
  Lookup find(const ColumnRef& ref, std::size_t* index) const;
  /// Throws ExecutionError when the reference does not resolve to exactly one column.
  std::size_t require(const ColumnRef& ref) const;

  std::optional<std::size_t> table_index(std::string_view name) const;

 private:
  std::vector<ScopeTable> tables_;
  std::vector<ScopeColumn> columns_;
};

/// Tables the query reads, or nullopt naming the first one that is missing.
std::vector<const Table*> query_tables(const VisQuery& v, const Database& db,
                                       std::string* missing);

}  // namespace vizforge::detail
