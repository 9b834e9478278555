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

#include "vizforge/predicate.hpp"

namespace vizforge {

std::string_view agg_name(AggFn fn) {
  switch (fn) {
    case AggFn::kNone:
      return "none";
    case AggFn::kCount:
      return "count";
    case AggFn::kSum:
      return "sum";
    case AggFn::kAvg:
      return "avg";
    case AggFn::kMin:
      return "min";
    case AggFn::kMax:
      return "max";
  }
  return "none";
}

std::optional<AggFn> parse_agg(std::string_view text) {
  for (AggFn fn : {AggFn::kNone, AggFn::kCount, AggFn::kSum, AggFn::kAvg, AggFn::kMin,
                   AggFn::kMax}) {
    if (iequals(text, agg_name(fn))) return fn;
  }
  return std::nullopt;
}

ColumnRef ColumnRef::parse(std::string_view text) {
  auto dot = text.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == text.size())
    return ColumnRef{"", std::string(text)};
  return ColumnRef{std::string(text.substr(0, dot)), std::string(text.substr(dot + 1))};
}

bool same_column(const ColumnRef& a, const ColumnRef& b) {
  if (!iequals(a.column, b.column)) return false;
  return a.table.empty() || b.table.empty() || iequals(a.table, b.table);
}

std::string_view compare_op_symbol(CompareOp op) {
  switch (op) {
    case CompareOp::kEq:
      return "=";
    case CompareOp::kNe:
      return "!=";
    case CompareOp::kLt:
      return "<";
    case CompareOp::kLe:
      return "<=";
    case CompareOp::kGt:
      return ">";
    case CompareOp::kGe:
      return ">=";
    case CompareOp::kLike:
      return "like";
  }
  return "=";
}

std::string quote_literal(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string render_literal(const Value& literal) {
  if (literal.is_number()) return format_number(literal.number());
  return quote_literal(literal.to_string());
}

}  // namespace vizforge
