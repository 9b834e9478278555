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

#include <string>
#include <vector>

#include <json.hpp>

#include "vizforge/database.hpp"
#include "vizforge/predicate.hpp"
#include "vizforge/vega_zero.hpp"

namespace vizforge {

/// A Vega-Lite v5 document. Keys keep insertion order, which compile() fixes as
/// `$schema`, `data`, `transform`, `mark`, `encoding`.
using VegaLiteSpec = nlohmann::ordered_json;

inline constexpr const char* kVegaLiteSchema = "https://vega.github.io/schema/vega-lite/v5.json";

/// Joined tables are attached with lookup transforms under `join_<table>`
/// (a many-to-one lookup; unmatched rows are filtered out). With inline_data
/// the executed rows are embedded and no transforms are emitted.
///
/// Throws ExecutionError when v does not validate against db.
VegaLiteSpec compile_vegalite(const VisQuery& v, const Database& db, bool inline_data = false);

/// 2-space indented JSON with a trailing newline.
std::string emit_text(const VegaLiteSpec& spec);

/// Structural problems with a document, empty when it is well formed. With a
/// database, named-data fields must resolve to columns whose role fits the
/// declared type.
std::vector<std::string> check_vegalite(const VegaLiteSpec& spec, const Database* db = nullptr);

/// Datum expression for one filter atom, e.g. `datum.states == 'Utah'`.
std::string filter_expression(const Comparison& atom, const std::string& field, Role role);

}  // namespace vizforge
