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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace vizforge {

/// Column taxonomy driving chart admissibility.
enum class Role { kCategorical, kTemporal, kQuantitative };

std::string_view role_name(Role role);
std::optional<Role> parse_role(std::string_view text);

/// Calendar date at day precision.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  /// ISO weekday, Monday = 1 ... Sunday = 7.
  int iso_weekday() const;
  std::string iso() const;
};

struct Null {
  auto operator<=>(const Null&) const = default;
};

/// A single cell: null, text, number or date.
class Value {
 public:
  using Storage = std::variant<Null, std::string, double, Date>;

  Value() = default;
  Value(Null) {}
  Value(std::string text) : data_(std::move(text)) {}
  Value(const char* text) : data_(std::string(text)) {}
  Value(double number) : data_(number) {}
  Value(int number) : data_(static_cast<double>(number)) {}
  Value(Date date) : data_(date) {}

  bool is_null() const { return std::holds_alternative<Null>(data_); }
  bool is_text() const { return std::holds_alternative<std::string>(data_); }
  bool is_number() const { return std::holds_alternative<double>(data_); }
  bool is_date() const { return std::holds_alternative<Date>(data_); }

  const std::string& text() const { return std::get<std::string>(data_); }
  double number() const { return std::get<double>(data_); }
  const Date& date() const { return std::get<Date>(data_); }

  const Storage& storage() const { return data_; }

  bool operator==(const Value& other) const = default;

  /// Rendering used by the CSV writer and by diagnostics. Null renders empty.
  std::string to_string() const;

 private:
  Storage data_;
};

/// Total order used for sorting: values of the same kind compare naturally,
/// nulls sort after everything, mixed kinds order by kind index.
std::weak_ordering compare_values(const Value& a, const Value& b);

std::optional<double> parse_number(std::string_view text);

/// Accepts YYYY-MM-DD, YYYY/MM/DD, YYYY-MM and YYYY.
std::optional<Date> parse_date(std::string_view text);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

/// Empty cells and the literal NULL (any case) are nulls in input files.
bool is_null_cell(std::string_view cell);

/// Parses a raw cell under a declared role; nullopt when it does not fit.
std::optional<Value> parse_cell(std::string_view cell, Role role);

std::string to_lower(std::string_view text);
bool iequals(std::string_view a, std::string_view b);
std::string_view trim(std::string_view text);

}  // namespace vizforge
