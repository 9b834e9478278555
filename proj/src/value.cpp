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

#include "vizforge/value.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace vizforge {

std::string_view role_name(Role role) {
  switch (role) {
    case Role::kCategorical:
      return "categorical";
    case Role::kTemporal:
      return "temporal";
    case Role::kQuantitative:
      return "quantitative";
  }
  return "categorical";
}

std::optional<Role> parse_role(std::string_view text) {
  if (iequals(text, "categorical")) return Role::kCategorical;
  if (iequals(text, "temporal")) return Role::kTemporal;
  if (iequals(text, "quantitative")) return Role::kQuantitative;
  return std::nullopt;
}

namespace {

bool is_leap(int year) { return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0; }

int days_in_month(int year, int month) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return month == 2 && is_leap(year) ? 29 : kDays[month - 1];
}

std::optional<int> parse_digits(std::string_view text, std::size_t count) {
  if (text.size() != count) return std::nullopt;
  int value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace

int Date::iso_weekday() const {
  // Sakamoto's method; 0 = Sunday.
  static constexpr std::array<int, 12> kOffsets = {0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4};
  int y = month < 3 ? year - 1 : year;
  int dow = (y + y / 4 - y / 100 + y / 400 + kOffsets[month - 1] + day) % 7;
  return dow == 0 ? 7 : dow;
}

std::string Date::iso() const {
  std::array<char, 16> buf{};
  std::snprintf(buf.data(), buf.size(), "%04d-%02d-%02d", year, month, day);
  return buf.data();
}

std::string Value::to_string() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Null>) {
          return {};
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else {
          return v.iso();
        }
      },
      data_);
}

std::weak_ordering compare_values(const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) {
    if (a.is_null() && b.is_null()) return std::weak_ordering::equivalent;
    return a.is_null() ? std::weak_ordering::greater : std::weak_ordering::less;
  }
  if (a.storage().index() != b.storage().index())
    return a.storage().index() <=> b.storage().index();
  if (a.is_number()) {
    double x = a.number(), y = b.number();
    if (x < y) return std::weak_ordering::less;
    if (x > y) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
  }
  if (a.is_text()) return a.text().compare(b.text()) <=> 0;
  return a.date() <=> b.date();
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

std::optional<Date> parse_date(std::string_view text) {
  text = trim(text);
  Date date;
  auto year = parse_digits(text.substr(0, 4), 4);
  if (!year) return std::nullopt;
  date.year = *year;
  if (text.size() == 4) return date;
  if (text.size() != 7 && text.size() != 10) return std::nullopt;
  char sep = text[4];
  if (sep != '-' && sep != '/') return std::nullopt;
  // YYYY/MM is not an accepted format
  if (text.size() == 7 && sep != '-') return std::nullopt;
  auto month = parse_digits(text.substr(5, 2), 2);
  if (!month || *month < 1 || *month > 12) return std::nullopt;
  date.month = *month;
  if (text.size() == 7) return date;
  if (text[7] != sep) return std::nullopt;
  auto day = parse_digits(text.substr(8, 2), 2);
  if (!day || *day < 1 || *day > days_in_month(date.year, date.month)) return std::nullopt;
  date.day = *day;
  return date;
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

bool is_null_cell(std::string_view cell) {
  cell = trim(cell);
  return cell.empty() || iequals(cell, "null");
}

std::optional<Value> parse_cell(std::string_view cell, Role role) {
  if (is_null_cell(cell)) return Value();
  switch (role) {
    case Role::kQuantitative:
      if (auto n = parse_number(cell)) return Value(*n);
      return std::nullopt;
    case Role::kTemporal:
      if (auto d = parse_date(cell)) return Value(*d);
      return std::nullopt;
    case Role::kCategorical:
      return Value(std::string(cell));
  }
  return std::nullopt;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

std::string_view trim(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

}  // namespace vizforge
