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

#include "vizforge/database.hpp"
#include "vizforge/vega_zero.hpp"

namespace vizforge::testing {

/// Straightforward evaluator for VisQuery transforms: cross-product joins,
/// linear-scan grouping and a stable sort. It shares nothing with the engine
/// beyond the data-core value types, and is slow on purpose.
std::vector<Row> brute_force_execute(const VisQuery& v, const Database& db);

/// Compares engine rows against oracle rows. Counts must match exactly; other
/// numbers within `rel_tol` relative difference. Fills `why` on mismatch.
bool rows_match(const std::vector<Row>& actual, const std::vector<Row>& expected, AggFn agg,
                double rel_tol, std::string* why);

}  // namespace vizforge::testing
