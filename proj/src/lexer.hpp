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

// Tokenizer shared by the SQL and Vega-Zero parsers.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vizforge::detail {

enum class Tok { kIdent, kNumber, kString, kSymbol, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;  // string tokens hold the unescaped body
  std::size_t pos = 0;
};

struct LexOptions {
  bool dash_in_ident = false;    // covid-19 is one identifier
  bool dot_in_ident = false;     // t1.a is one identifier
  bool backtick_opens_string = false;  // `China' as written in LaTeX-quoted text
  bool double_quoted_strings = false;
};

/// Throws SyntaxError on an unterminated string or a character no token starts with.
std::vector<Token> lex(std::string_view text, const LexOptions& options);

std::string describe(const Token& token);

}  // namespace vizforge::detail
