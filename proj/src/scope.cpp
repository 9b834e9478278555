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

#include "scope.hpp"

#include "vizforge/error.hpp"

namespace vizforge::detail {

Scope::Scope(std::vector<const Table*> tables) {
  for (const Table* t : tables) {
    tables_.push_back({t, columns_.size()});
    for (const auto& c : t->columns()) columns_.push_back({t->name(), c.name, c.role});
  }
}

Scope::Lookup Scope::find(const ColumnRef& ref, std::size_t* index) const {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const auto& c = columns_[i];
    if (!iequals(c.name, ref.column)) continue;
    if (ref.qualified() && !iequals(c.table, ref.table)) continue;
    if (hits++ == 0 && index) *index = i;
  }
  if (hits == 0) return Lookup::kMissing;
  return hits == 1 ? Lookup::kFound : Lookup::kAmbiguous;
}

std::size_t Scope::require(const ColumnRef& ref) const {
  std::size_t idx = 0;
  if (find(ref, &idx) != Lookup::kFound)
    throw ExecutionError("column " + ref.to_string() + " does not resolve");
  return idx;
}

std::optional<std::size_t> Scope::table_index(std::string_view name) const {
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    if (iequals(tables_[i].table->name(), name)) return i;
  }
  return std::nullopt;
}

std::vector<const Table*> query_tables(const VisQuery& v, const Database& db,
                                       std::string* missing) {
  std::vector<const Table*> out;
  const Table* base = bound_table(v, db);
  if (!base) {
    if (missing) *missing = v.data.value_or("");
    return {};
  }
  out.push_back(base);
  for (const auto& j : v.joins) {
    const Table* t = db.find_table(j.table);
    if (!t) {
      if (missing) *missing = j.table;
      return {};
    }
    out.push_back(t);
  }
  return out;
}

}  // namespace vizforge::detail
