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

#include "vizforge/database.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vizforge/error.hpp"

namespace vizforge {

namespace fs = std::filesystem;

Table::Table(std::string name, std::vector<Column> columns, std::vector<Row> rows)
    : name_(std::move(name)), columns_(std::move(columns)) {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (iequals(columns_[i].name, columns_[j].name))
        throw InvariantViolation("duplicate column '" + columns_[i].name + "' in table '" +
                                 name_ + "'");
    }
  }
  rows_.reserve(rows.size());
  for (auto& row : rows) add_row(std::move(row));
}

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (iequals(columns_[i].name, name)) return i;
  }
  return std::nullopt;
}

std::size_t Table::column_index(std::string_view name) const {
  if (auto idx = find_column(name)) return *idx;
  throw UnknownColumn(std::string(name));
}

void Table::add_row(Row row) {
  if (row.size() != columns_.size())
    throw InvariantViolation("row width " + std::to_string(row.size()) + " != " +
                             std::to_string(columns_.size()) + " columns in '" + name_ + "'");
  rows_.push_back(std::move(row));
}

Database::Database(std::string id, std::vector<Table> tables)
    : id_(std::move(id)), tables_(std::move(tables)) {
  if (id_.empty()) throw InvariantViolation("database id must be non-empty");
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (iequals(tables_[i].name(), tables_[j].name()))
        throw InvariantViolation("duplicate table '" + tables_[i].name() + "'");
    }
  }
}

const Table* Database::find_table(std::string_view name) const {
  for (const auto& t : tables_) {
    if (iequals(t.name(), name)) return &t;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// CSV

namespace csv {

std::vector<Record> parse(std::string_view text, const std::string& file_name) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_open = false;
  std::size_t line = 1;
  std::size_t quote_line = 0;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(current));
    current = Record{};
    record_open = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (!record_open) {
      current.line = line;
      record_open = true;
    }
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted)
          throw LoadError(LoadError::Kind::kMalformedRow, file_name, line,
                          "quote inside unquoted field");
        in_quotes = true;
        field_was_quoted = true;
        quote_line = line;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        break;
      default:
        if (field_was_quoted)
          throw LoadError(LoadError::Kind::kMalformedRow, file_name, line,
                          "text after closing quote");
        field.push_back(c);
    }
  }
  if (in_quotes)
    throw LoadError(LoadError::Kind::kMalformedRow, file_name, quote_line, "unterminated quote");
  if (record_open) end_record();
  return records;
}

std::string quote(std::string_view field) {
  bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos ||
               (!field.empty() && (field.front() == ' ' || field.back() == ' ' ||
                                   field.front() == '\t' || field.back() == '\t'));
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_row(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += quote(fields[i]);
  }
  return out;
}

}  // namespace csv

std::string table_to_csv(const Table& table) {
  std::string out;
  std::vector<std::string> fields;
  for (const auto& c : table.columns()) fields.push_back(c.name);
  out += csv::format_row(fields) + "\n";
  for (const auto& row : table.rows()) {
    fields.clear();
    for (const auto& v : row) {
      // a one-column row of a single null must not collapse into a blank line
      fields.push_back(v.is_null() && row.size() == 1 ? "NULL" : v.to_string());
    }
    out += csv::format_row(fields) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loading

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(LoadError::Kind::kUnreadable, path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ManifestColumn {
  std::string name;
  std::optional<Role> role;
};

struct ManifestTable {
  std::string name;
  std::vector<ManifestColumn> columns;
};

std::vector<ManifestTable> parse_manifest(const std::string& text, const std::string& file) {
  std::vector<ManifestTable> tables;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto colon = body.find(':');
    if (colon == std::string_view::npos)
      throw LoadError(LoadError::Kind::kMalformedRow, file, line_no,
                      "expected 'table: column [role], ...'");
    ManifestTable table;
    table.name = std::string(trim(body.substr(0, colon)));
    if (table.name.empty())
      throw LoadError(LoadError::Kind::kMalformedRow, file, line_no, "empty table name");
    auto rest = body.substr(colon + 1);
    while (!rest.empty()) {
      auto comma = rest.find(',');
      auto spec = trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      if (spec.empty())
        throw LoadError(LoadError::Kind::kMalformedRow, file, line_no, "empty column entry");
      ManifestColumn col;
      auto space = spec.find_last_of(" \t");
      if (space != std::string_view::npos) {
        if (auto role = parse_role(trim(spec.substr(space + 1)))) {
          col.role = role;
          spec = trim(spec.substr(0, space));
        }
      }
      col.name = std::string(spec);
      table.columns.push_back(std::move(col));
    }
    if (table.columns.empty())
      throw LoadError(LoadError::Kind::kMalformedRow, file, line_no, "table has no columns");
    tables.push_back(std::move(table));
  }
  return tables;
}

Table load_table(const ManifestTable& spec, const fs::path& dir,
                 std::vector<LoadWarning>* warnings) {
  fs::path path = dir / (spec.name + ".csv");
  std::string file = path.string();
  auto records = csv::parse(read_file(path), file);
  if (records.empty())
    throw LoadError(LoadError::Kind::kMalformedRow, file, 1, "missing header line");

  const auto& header = records.front().fields;
  if (header.size() != spec.columns.size())
    throw LoadError(LoadError::Kind::kMalformedRow, file, 1,
                    "header has " + std::to_string(header.size()) + " fields, manifest declares " +
                        std::to_string(spec.columns.size()));
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!iequals(trim(header[i]), spec.columns[i].name))
      throw LoadError(LoadError::Kind::kMalformedRow, file, 1,
                      "header field '" + header[i] + "' does not match manifest column '" +
                          spec.columns[i].name + "'");
  }

  std::vector<const csv::Record*> data;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    // a blank line parses as one empty field; skip it unless the table is one column wide
    if (rec.fields.size() == 1 && rec.fields[0].empty() && spec.columns.size() != 1) continue;
    if (rec.fields.size() != spec.columns.size())
      throw LoadError(LoadError::Kind::kMalformedRow, file, rec.line,
                      "expected " + std::to_string(spec.columns.size()) + " fields, found " +
                          std::to_string(rec.fields.size()));
    data.push_back(&rec);
  }

  std::vector<Column> columns;
  for (std::size_t c = 0; c < spec.columns.size(); ++c) {
    Role role;
    if (spec.columns[c].role) {
      role = *spec.columns[c].role;
    } else {
      std::vector<std::string> cells;
      cells.reserve(data.size());
      for (const auto* rec : data) cells.push_back(rec->fields[c]);
      role = infer_role(cells);
    }
    columns.push_back(Column{spec.columns[c].name, role});
  }

  std::vector<Row> rows(data.size(), Row(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::size_t non_empty = 0, failed = 0;
    for (std::size_t r = 0; r < data.size(); ++r) {
      const auto& cell = data[r]->fields[c];
      if (!is_null_cell(cell)) ++non_empty;
      if (auto v = parse_cell(cell, columns[c].role)) {
        rows[r][c] = std::move(*v);
      } else {
        ++failed;
        if (warnings)
          warnings->push_back({file, data[r]->line,
                               "cell '" + cell + "' is not " +
                                   std::string(role_name(columns[c].role)) + "; stored as null"});
      }
    }
    if (failed * 2 > non_empty)
      throw LoadError(LoadError::Kind::kRoleMismatch, file, 0,
                      std::to_string(failed) + " of " + std::to_string(non_empty) +
                          " cells in column '" + columns[c].name + "' are not " +
                          std::string(role_name(columns[c].role)));
  }
  return Table(spec.name, std::move(columns), std::move(rows));
}

}  // namespace

Database load_database(const fs::path& root, std::vector<LoadWarning>* warnings) {
  fs::path manifest = root / "schema";
  if (!fs::is_regular_file(manifest))
    throw LoadError(LoadError::Kind::kMissingManifest, manifest.string(), 0, "no schema manifest");
  auto specs = parse_manifest(read_file(manifest), manifest.string());
  std::vector<Table> tables;
  for (const auto& spec : specs) tables.push_back(load_table(spec, root, warnings));
  std::string id = root.filename().string();
  if (id.empty()) id = root.parent_path().filename().string();
  return Database(id, std::move(tables));
}

std::vector<Database> load_databases(const fs::path& root, std::vector<LoadWarning>* warnings) {
  if (!fs::is_directory(root))
    throw LoadError(LoadError::Kind::kUnreadable, root.string(), 0, "not a directory");
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::is_regular_file(entry.path() / "schema"))
      dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<Database> out;
  for (const auto& d : dirs) out.push_back(load_database(d, warnings));
  return out;
}

void write_database(const Database& db, const fs::path& root) {
  fs::create_directories(root);
  std::ofstream manifest(root / "schema", std::ios::binary);
  for (const auto& t : db.tables()) {
    manifest << t.name() << ":";
    for (std::size_t i = 0; i < t.columns().size(); ++i) {
      manifest << (i ? ", " : " ") << t.columns()[i].name << ' ' << role_name(t.columns()[i].role);
    }
    manifest << '\n';
    std::ofstream out(root / (t.name() + ".csv"), std::ios::binary);
    out << table_to_csv(t);
  }
}

// ---------------------------------------------------------------------------
// Statistics

Role infer_role(std::span<const std::string> cells) {
  std::size_t non_empty = 0, numeric = 0, temporal = 0;
  for (const auto& cell : cells) {
    if (is_null_cell(cell)) continue;
    ++non_empty;
    if (parse_number(cell)) ++numeric;
    if (parse_date(cell)) ++temporal;
  }
  if (non_empty == 0) return Role::kCategorical;
  // integer arithmetic keeps the 95% cut exact
  if (numeric * 100 >= non_empty * 95) return Role::kQuantitative;
  if (temporal * 100 >= non_empty * 95) return Role::kTemporal;
  return Role::kCategorical;
}

ColumnStats column_stats(const Table& table, std::string_view column_name) {
  std::size_t idx = table.column_index(column_name);
  Role role = table.columns()[idx].role;
  ColumnStats stats;
  stats.n_tuples = table.num_rows();
  std::vector<Value> values;
  for (const auto& row : table.rows()) {
    if (!row[idx].is_null()) values.push_back(row[idx]);
  }
  std::sort(values.begin(), values.end(),
            [](const Value& a, const Value& b) { return compare_values(a, b) < 0; });
  auto last = std::unique(values.begin(), values.end());
  values.erase(last, values.end());
  stats.n_distinct = values.size();
  stats.unique_ratio =
      stats.n_tuples ? static_cast<double>(stats.n_distinct) / stats.n_tuples : 0.0;
  if (role != Role::kCategorical && !values.empty()) {
    stats.min_value = values.front();
    stats.max_value = values.back();
  }
  return stats;
}

double correlation(const Table& table, std::string_view col_a, std::string_view col_b) {
  std::size_t ia = table.column_index(col_a);
  std::size_t ib = table.column_index(col_b);
  if (table.columns()[ia].role != Role::kQuantitative) throw NotQuantitative(std::string(col_a));
  if (table.columns()[ib].role != Role::kQuantitative) throw NotQuantitative(std::string(col_b));
  std::vector<std::pair<double, double>> pairs;
  for (const auto& row : table.rows()) {
    if (row[ia].is_number() && row[ib].is_number())
      pairs.emplace_back(row[ia].number(), row[ib].number());
  }
  if (pairs.size() < 2) return 0.0;
  double mean_a = 0, mean_b = 0;
  for (auto [a, b] : pairs) {
    mean_a += a;
    mean_b += b;
  }
  mean_a /= pairs.size();
  mean_b /= pairs.size();
  double cov = 0, var_a = 0, var_b = 0;
  for (auto [a, b] : pairs) {
    cov += (a - mean_a) * (b - mean_b);
    var_a += (a - mean_a) * (a - mean_a);
    var_b += (b - mean_b) * (b - mean_b);
  }
  if (var_a == 0 || var_b == 0) return 0.0;
  return std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
}

}  // namespace vizforge
