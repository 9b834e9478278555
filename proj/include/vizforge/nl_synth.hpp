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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vizforge/synthesizer.hpp"

namespace vizforge {

enum class NlStyle { kCommand, kQuestion, kCaption };

std::string_view nl_style_name(NlStyle style);

struct NlVariant {
  std::string text;
  NlStyle style = NlStyle::kCommand;
  bool rework_flag = false;  // a deletion could not be reflected in the text

  bool operator==(const NlVariant&) const = default;
};

/// Templates keyed by `style.kind`, where kind is `base`, `bin` or `group`.
/// Placeholders: {chart_phrase}, {description}, {x}, {y}, {bin_unit}.
class NlTemplates {
 public:
  /// The built-in set.
  NlTemplates();

  /// One `style.kind = template` per line; `#` starts a comment. Entries
  /// override the built-in set. Throws ConfigError on a malformed line, an
  /// unknown key or an unknown placeholder.
  static NlTemplates parse(std::string_view text);
  static NlTemplates load(const std::filesystem::path& file);

  /// Empty when the key has no template.
  const std::string& get(NlStyle style, std::string_view kind) const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

/// bar -> "bar chart", pie -> "pie chart", scatter -> "scatter plot", ...
/// Colored types share the phrase of their base type; the variants add
/// "colored by <column>" to the description.
std::string_view chart_phrase(ChartType ct);

/// The source question with a leading imperative and trailing punctuation removed.
std::string extract_description(std::string_view source_nl);

/// Command, question and caption variants, plus a command variant for an
/// inserted bin or group. Sort and limit deletions are removed from the
/// description by keyword; other deletions mark the variants for rework.
std::vector<NlVariant> synthesize_nl(std::string_view source_nl, const ChartCandidate& c,
                                     const NlTemplates& templates = NlTemplates());

}  // namespace vizforge
