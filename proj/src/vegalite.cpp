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

#include "vizforge/vegalite.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "scope.hpp"
#include "vizforge/engine.hpp"
#include "vizforge/error.hpp"

namespace vizforge {
namespace {

using json = VegaLiteSpec;

std::string_view vl_type(Role role) {
  switch (role) {
    case Role::kCategorical:
      return "nominal";
    case Role::kTemporal:
      return "temporal";
    case Role::kQuantitative:
      return "quantitative";
  }
  return "nominal";
}

std::string_view vl_aggregate(AggFn fn) {
  switch (fn) {
    case AggFn::kCount:
      return "count";
    case AggFn::kSum:
      return "sum";
    case AggFn::kAvg:
      return "mean";
    case AggFn::kMin:
      return "min";
    case AggFn::kMax:
      return "max";
    case AggFn::kNone:
      break;
  }
  return "";
}

std::string_view vl_time_unit(TimeUnit unit) {
  switch (unit) {
    case TimeUnit::kYear:
      return "year";
    case TimeUnit::kMonth:
      return "yearmonth";
    case TimeUnit::kDay:
      return "yearmonthdate";
    case TimeUnit::kWeekday:
      return "day";
  }
  return "year";
}

std::string_view vl_mark(ChartType ct) {
  switch (without_color(ct)) {
    case ChartType::kBar:
      return "bar";
    case ChartType::kPie:
      return "arc";
    case ChartType::kLine:
      return "line";
    default:
      return "point";
  }
}

bool is_identifier(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string js_string(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\\' || c == '\'') out += '\\';
    out += c;
  }
  return out + "'";
}

// `datum.a`, `datum.join_t.a` or `datum['odd name']` for a field path.
std::string datum_access(const std::string& field) {
  std::string out = "datum";
  std::size_t start = 0;
  while (true) {
    std::size_t dot = field.find('.', start);
    std::string part = field.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    out += is_identifier(part) ? "." + part : "[" + js_string(part) + "]";
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return out;
}

std::string like_regex(std::string_view pattern) {
  std::string out = "^";
  for (char c : pattern) {
    if (c == '%') {
      out += ".*";
    } else if (c == '_') {
      out += '.';
    } else {
      if (std::string_view("\\^$.|?*+()[]{}/").find(c) != std::string_view::npos) out += '\\';
      out += c;
    }
  }
  return out + "$";
}

// Escapes the characters Vega-Lite reads as field-path syntax.
std::string escape_field(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '.' || c == '[' || c == ']' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

json cell_json(const Value& v) {
  if (v.is_null()) return nullptr;
  if (v.is_text()) return v.text();
  if (v.is_date()) return v.date().iso();
  double d = v.number();
  if (std::floor(d) == d && std::fabs(d) < 9e15) return static_cast<std::int64_t>(d);
  return d;
}

class Compiler {
 public:
  Compiler(const VisQuery& v, const Database& db) : v_(v), db_(db), scope_(tables(v, db)) {}

  json compile(bool inline_data) {
    json spec;
    spec["$schema"] = kVegaLiteSchema;
    if (inline_data) {
      compile_inline(spec);
      return spec;
    }
    spec["data"] = {{"name", to_lower(scope_.tables()[0].table->name())}};
    json transform = json::array();
    for (std::size_t i = 1; i < scope_.tables().size(); ++i) add_lookup(transform, i);
    if (v_.filter) {
      for (const auto& atom : v_.filter->atoms) {
        std::size_t idx = scope_.require(atom.column);
        transform.push_back({{"filter", filter_expression(atom, field_of(idx), scope_.columns()[idx].role)}});
      }
    }
    json encoding;
    if (v_.topk) {
      compile_ranked(transform, encoding);
    } else {
      encoding = channels();
    }
    if (!transform.empty()) spec["transform"] = transform;
    spec["mark"] = vl_mark(v_.mark);
    spec["encoding"] = encoding;
    return spec;
  }

 private:
  static std::vector<const Table*> tables(const VisQuery& v, const Database& db) {
    std::string missing;
    auto ts = detail::query_tables(v, db, &missing);
    if (!missing.empty()) throw ExecutionError("unknown table '" + missing + "'");
    return ts;
  }

  std::string alias(std::size_t table_idx) const {
    return "join_" + to_lower(scope_.tables()[table_idx].table->name());
  }

  std::size_t table_of(std::size_t column_idx) const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < scope_.tables().size(); ++i) {
      if (scope_.tables()[i].offset <= column_idx) t = i;
    }
    return t;
  }

  std::string field_of(std::size_t column_idx) const {
    std::size_t t = table_of(column_idx);
    std::string name = escape_field(scope_.columns()[column_idx].name);
    return t == 0 ? name : alias(t) + "." + name;
  }

  void add_lookup(json& transform, std::size_t i) {
    const Table* table = scope_.tables()[i].table;
    const VisJoin* join = nullptr;
    for (const auto& j : v_.joins) {
      if (iequals(j.table, table->name())) join = &j;
    }
    if (!join) throw ExecutionError("no join condition for '" + table->name() + "'");
    std::size_t l = scope_.require(join->left);
    std::size_t r = scope_.require(join->right);
    if (table_of(l) == i) std::swap(l, r);
    transform.push_back({{"lookup", field_of(l)},
                         {"from", {{"data", {{"name", to_lower(table->name())}}},
                                   {"key", escape_field(scope_.columns()[r].name)}}},
                         {"as", alias(i)}});
    transform.push_back({{"filter", "isValid(" + datum_access(alias(i)) + ")"}});
  }

  json channel(const ColumnRef& ref) const {
    std::size_t idx = scope_.require(ref);
    return {{"field", field_of(idx)}, {"type", vl_type(scope_.columns()[idx].role)}};
  }

  json y_channel() const {
    json y;
    if (v_.y.aggregate == AggFn::kCount && v_.y.column.column == "*") {
      y["aggregate"] = "count";
      y["type"] = "quantitative";
      return y;
    }
    y = channel(v_.y.column);
    if (v_.y.aggregate != AggFn::kNone) y["aggregate"] = vl_aggregate(v_.y.aggregate);
    y["type"] = "quantitative";
    return y;
  }

  json x_channel() const {
    json x = channel(v_.x);
    if (v_.bin) x["timeUnit"] = vl_time_unit(*v_.bin);
    return x;
  }

  json sort_value() const {
    bool desc = v_.sort->direction == SortDirection::kDesc;
    if (v_.sort->target == VisSort::Target::kX) return desc ? "descending" : "ascending";
    std::string by = v_.mark == ChartType::kPie ? "theta" : "y";
    return desc ? "-" + by : by;
  }

  // Places x, y and color on the channels of the mark.
  json arrange(json x, json y) const {
    json enc;
    if (v_.mark == ChartType::kPie) {
      if (v_.sort) x["sort"] = sort_value();
      enc["theta"] = y;
      enc["color"] = x;
      return enc;
    }
    if (v_.sort) x["sort"] = sort_value();
    enc["x"] = x;
    enc["y"] = y;
    if (v_.color) enc["color"] = channel(*v_.color);
    return enc;
  }

  json channels() const { return arrange(x_channel(), y_channel()); }

  // topk needs the final rows before ranking, so aggregation moves into transforms.
  void compile_ranked(json& transform, json& encoding) {
    json x = channel(v_.x);
    std::string x_field = x["field"];
    if (v_.bin) {
      std::string binned = escape_field(to_lower(v_.x.column) + "_" + std::string(time_unit_name(*v_.bin)));
      transform.push_back({{"timeUnit", vl_time_unit(*v_.bin)}, {"field", x_field}, {"as", binned}});
      x["field"] = binned;
      x["timeUnit"] = vl_time_unit(*v_.bin);
      x_field = binned;
    }
    json y;
    std::string y_field;
    if (v_.y.aggregate != AggFn::kNone) {
      y_field = escape_field(v_.y.column.column == "*" ? "count"
                                                       : std::string(vl_aggregate(v_.y.aggregate)) + "_" +
                                                             to_lower(v_.y.column.column));
      json op = {{"op", vl_aggregate(v_.y.aggregate)}};
      if (v_.y.column.column != "*") op["field"] = y_channel()["field"];
      op["as"] = y_field;
      json groupby = json::array({x_field});
      if (v_.color) groupby.push_back(channel(*v_.color)["field"]);
      transform.push_back({{"aggregate", json::array({op})}, {"groupby", groupby}});
      y = {{"field", y_field}, {"type", "quantitative"}};
    } else {
      y = y_channel();
      y_field = y["field"];
    }
    bool desc = v_.sort && v_.sort->direction == SortDirection::kDesc;
    std::string by = v_.sort && v_.sort->target == VisSort::Target::kY ? y_field : x_field;
    transform.push_back({{"window", json::array({{{"op", "row_number"}, {"as", "rank"}}})},
                         {"sort", json::array({{{"field", by}, {"order", desc ? "descending" : "ascending"}}})}});
    transform.push_back({{"filter", "datum.rank <= " + std::to_string(*v_.topk)}});
    encoding = arrange(x, y);
  }

  void compile_inline(json& spec) {
    ResultTable result = execute(v_, db_);
    json values = json::array();
    for (const auto& row : result.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[result.columns[i].name] = cell_json(row[i]);
      values.push_back(obj);
    }
    spec["data"] = {{"values", values}};
    spec["mark"] = vl_mark(v_.mark);
    auto field = [&](std::size_t i) {
      return json{{"field", escape_field(result.columns[i].name)}, {"type", vl_type(result.columns[i].role)}};
    };
    json x = field(0);
    x["sort"] = nullptr;  // rows arrive in their final order
    json y = field(1);
    json enc;
    if (v_.mark == ChartType::kPie) {
      enc["theta"] = y;
      enc["color"] = x;
    } else {
      enc["x"] = x;
      enc["y"] = y;
      if (result.columns.size() > 2) enc["color"] = field(2);
    }
    spec["encoding"] = enc;
  }

  const VisQuery& v_;
  const Database& db_;
  detail::Scope scope_;
};

const std::set<std::string>& known_marks() {
  static const std::set<std::string> s = {"bar", "arc", "line", "point"};
  return s;
}

}  // namespace

std::string filter_expression(const Comparison& atom, const std::string& field, Role role) {
  std::string lhs = datum_access(field);
  std::string rhs;
  if (atom.op == CompareOp::kLike) {
    std::string text = atom.literal.is_text() ? atom.literal.text() : atom.literal.to_string();
    return "isValid(" + lhs + ") && test(regexp(" + js_string(like_regex(text)) + ", 'i'), " + lhs + ")";
  }
  if (role == Role::kTemporal && atom.literal.is_text()) {
    auto d = parse_date(atom.literal.text());
    lhs = "time(" + lhs + ")";
    rhs = "time(" + js_string(d ? d->iso() : atom.literal.text()) + ")";
  } else if (atom.literal.is_number()) {
    rhs = format_number(atom.literal.number());
  } else {
    rhs = js_string(atom.literal.to_string());
  }
  std::string_view op;
  switch (atom.op) {
    case CompareOp::kEq:
      op = "==";
      break;
    case CompareOp::kNe:
      op = "!=";
      break;
    case CompareOp::kLt:
      op = "<";
      break;
    case CompareOp::kLe:
      op = "<=";
      break;
    case CompareOp::kGt:
      op = ">";
      break;
    case CompareOp::kGe:
      op = ">=";
      break;
    case CompareOp::kLike:
      break;
  }
  std::string expr = lhs + " " + std::string(op) + " " + rhs;
  // SQL comparisons with null are false; JavaScript ones need not be
  if (atom.op != CompareOp::kEq) expr = "isValid(" + datum_access(field) + ") && " + expr;
  return expr;
}

VegaLiteSpec compile_vegalite(const VisQuery& v, const Database& db, bool inline_data) {
  auto violations = validate(v, db);
  if (!violations.empty()) throw ExecutionError("query does not validate: " + violations[0].to_string());
  return Compiler(v, db).compile(inline_data);
}

std::string emit_text(const VegaLiteSpec& spec) { return spec.dump(2) + "\n"; }

std::vector<std::string> check_vegalite(const VegaLiteSpec& spec, const Database* db) {
  std::vector<std::string> problems;
  auto problem = [&](std::string p) { problems.push_back(std::move(p)); };
  if (!spec.is_object()) return {"document is not an object"};
  if (!spec.contains("$schema") || !spec["$schema"].is_string()) problem("missing $schema");

  std::set<std::string> produced;
  if (spec.contains("transform")) {
    if (!spec["transform"].is_array()) {
      problem("transform is not an array");
    } else {
      static const std::set<std::string> kinds = {"filter", "lookup", "window", "aggregate", "timeUnit"};
      for (const auto& t : spec["transform"]) {
        if (!t.is_object() || t.empty() || !kinds.count(t.begin().key())) {
          problem("unknown transform " + t.dump());
          continue;
        }
        if (t.contains("as") && t["as"].is_string()) produced.insert(t["as"].get<std::string>());
        for (const char* list : {"aggregate", "window"}) {
          if (!t.contains(list) || !t[list].is_array()) continue;
          for (const auto& op : t[list]) {
            if (op.contains("as")) produced.insert(op["as"].get<std::string>());
          }
        }
      }
    }
  }

  const Table* table = nullptr;
  std::set<std::string> inline_keys;
  bool inline_data = false;
  if (!spec.contains("data") || !spec["data"].is_object()) {
    problem("missing data");
  } else if (spec["data"].contains("values")) {
    inline_data = true;
    if (spec.contains("transform")) problem("inline data with transforms");
    const auto& values = spec["data"]["values"];
    if (!values.is_array()) problem("data.values is not an array");
    for (const auto& row : values) {
      for (const auto& [k, _] : row.items()) inline_keys.insert(escape_field(k));
    }
  } else if (spec["data"].contains("name") && spec["data"]["name"].is_string()) {
    if (db) {
      table = db->find_table(spec["data"]["name"].get<std::string>());
      if (!table) problem("data names unknown table " + spec["data"]["name"].get<std::string>());
    }
  } else {
    problem("data has neither name nor values");
  }

  if (!spec.contains("mark") || !spec["mark"].is_string() || !known_marks().count(spec["mark"].get<std::string>())) {
    problem("missing or unknown mark");
    return problems;
  }
  std::string mark = spec["mark"];
  if (!spec.contains("encoding") || !spec["encoding"].is_object()) {
    problem("missing encoding");
    return problems;
  }
  const auto& enc = spec["encoding"];
  std::vector<std::string> required = mark == "arc" ? std::vector<std::string>{"theta", "color"}
                                                     : std::vector<std::string>{"x", "y"};
  for (const auto& ch : required) {
    if (!enc.contains(ch)) problem("encoding." + ch + " missing");
  }
  static const std::set<std::string> types = {"nominal", "ordinal", "temporal", "quantitative"};
  static const std::set<std::string> aggregates = {"count", "sum", "mean", "min", "max"};
  static const std::set<std::string> units = {"year", "yearmonth", "yearmonthdate", "day"};
  for (const auto& [name, ch] : enc.items()) {
    if (!ch.is_object()) {
      problem("encoding." + name + " is not an object");
      continue;
    }
    if (!ch.contains("type") || !types.count(ch["type"].get<std::string>())) problem("encoding." + name + " has no valid type");
    if (ch.contains("aggregate") && !aggregates.count(ch["aggregate"].get<std::string>())) {
      problem("encoding." + name + " has unknown aggregate");
    }
    if (ch.contains("timeUnit") && !units.count(ch["timeUnit"].get<std::string>())) {
      problem("encoding." + name + " has unknown timeUnit");
    }
    if (!ch.contains("field")) {
      if (ch.value("aggregate", "") != "count") problem("encoding." + name + " has no field");
      continue;
    }
    std::string field = ch["field"];
    std::string type = ch.value("type", "");
    if (inline_data) {
      if (!inline_keys.empty() && !inline_keys.count(field)) problem("encoding." + name + " field not in data: " + field);
      continue;
    }
    if (!db || !table || produced.count(field)) continue;
    const Table* source = table;
    std::string column = field;
    if (field.starts_with("join_")) {
      std::size_t dot = field.find('.');
      source = dot == std::string::npos ? nullptr : db->find_table(field.substr(5, dot - 5));
      column = dot == std::string::npos ? field : field.substr(dot + 1);
    }
    auto idx = source ? source->find_column(column) : std::nullopt;
    if (!idx) {
      problem("encoding." + name + " field does not resolve: " + field);
      continue;
    }
    Role role = source->columns()[*idx].role;
    bool aggregated = ch.contains("aggregate");
    if (!aggregated && type != vl_type(role)) {
      problem("encoding." + name + " type " + type + " does not fit role " + std::string(role_name(role)));
    }
    if (aggregated && ch["aggregate"] != "count" && role != Role::kQuantitative) {
      problem("encoding." + name + " aggregates a non-quantitative field");
    }
  }
  return problems;
}

}  // namespace vizforge
