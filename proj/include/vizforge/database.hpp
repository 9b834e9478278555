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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vizforge/value.hpp"

namespace vizforge {

struct Column {
  std::string name;
  Role role = Role::kCategorical;

  bool operator==(const Column&) const = default;
};

using Row = std::vector<Value>;

/// A named relation. Column lookups ignore case; the original casing is kept for display.
class Table {
 public:
  Table() = default;
  Table(std::string name, std::vector<Column> columns, std::vector<Row> rows = {});

  const std::string& name() const { return name_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t num_rows() const { return rows_.size(); }

  std::optional<std::size_t> find_column(std::string_view name) const;
  /// Throws UnknownColumn.
  std::size_t column_index(std::string_view name) const;

  void add_row(Row row);

  bool operator==(const Table&) const = default;

 private:
  std::string name_;
  std::vector<Column> columns_;
  std::vector<Row> rows_;
};

class Database {
 public:
  Database() = default;
  Database(std::string id, std::vector<Table> tables);

  const std::string& id() const { return id_; }
  const std::vector<Table>& tables() const { return tables_; }

  const Table* find_table(std::string_view name) const;

  bool operator==(const Database&) const = default;

 private:
  std::string id_;
  std::vector<Table> tables_;
};

struct ColumnStats {
  std::size_t n_distinct = 0;
  std::size_t n_tuples = 0;
  double unique_ratio = 0.0;
  std::optional<Value> min_value;
  std::optional<Value> max_value;
};

struct LoadWarning {
  std::string file;
  std::size_t line = 0;
  std::string message;
};

/// Reads `<root>/schema` and one `<table>.csv` per declared table.
///
/// The manifest holds one table per line: `name: col [role], col [role], ...`.
/// Blank lines and lines starting with `#` are ignored. A column without a role
/// gets one from infer_role over its cells. Cells that do not parse under the
/// declared role become null and produce a warning; if more than half of a
/// column's non-empty cells fail, loading throws LoadError(kRoleMismatch).
Database load_database(const std::filesystem::path& root,
                       std::vector<LoadWarning>* warnings = nullptr);

/// Loads every subdirectory of `root` that holds a schema manifest, sorted by name.
std::vector<Database> load_databases(const std::filesystem::path& root,
                                     std::vector<LoadWarning>* warnings = nullptr);

/// Writes the manifest and CSV files in the same format load_database reads.
void write_database(const Database& db, const std::filesystem::path& root);

Role infer_role(std::span<const std::string> cells);

ColumnStats column_stats(const Table& table, std::string_view column_name);

/// Pearson correlation over rows where both values are non-null.
/// Returns 0 for fewer than two pairs or a zero variance.
double correlation(const Table& table, std::string_view col_a, std::string_view col_b);

namespace csv {

/// Splits RFC 4180 style text into records. Quoted fields may contain commas,
/// doubled quotes and newlines. Each record carries the 1-based line it starts on.
struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};
std::vector<Record> parse(std::string_view text, const std::string& file_name);

std::string quote(std::string_view field);
std::string format_row(std::span<const std::string> fields);

}  // namespace csv

/// Header line plus one line per row, null cells empty.
std::string table_to_csv(const Table& table);

}  // namespace vizforge
