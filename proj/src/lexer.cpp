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

#include "lexer.hpp"

#include <cctype>

#include "vizforge/error.hpp"

namespace vizforge::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c, const LexOptions& o) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || (o.dash_in_ident && c == '-') ||
         (o.dot_in_ident && c == '.');
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::vector<Token> lex(std::string_view text, const LexOptions& o) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (ident_start(c)) {
      while (i < text.size() && ident_char(text[i], o)) ++i;
      // a dash or dot may not end an identifier
      while (i > start + 1 && (text[i - 1] == '-' || text[i - 1] == '.')) --i;
      out.push_back({Tok::kIdent, std::string(text.substr(start, i - start)), start});
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < text.size() && is_digit(text[i + 1]))) {
      while (i < text.size() && is_digit(text[i])) ++i;
      if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && is_digit(text[i])) ++i;
      }
      if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < text.size() && is_digit(text[j])) {
          i = j;
          while (i < text.size() && is_digit(text[i])) ++i;
        }
      }
      if (i < text.size() && ident_char(text[i], o) && text[i] != '.') {
        // 2020_sales and the like are identifiers
        while (i < text.size() && ident_char(text[i], o)) ++i;
        out.push_back({Tok::kIdent, std::string(text.substr(start, i - start)), start});
      } else {
        out.push_back({Tok::kNumber, std::string(text.substr(start, i - start)), start});
      }
      continue;
    }
    if (c == '\'' || (o.backtick_opens_string && c == '`') || (o.double_quoted_strings && c == '"')) {
      char close = c == '"' ? '"' : '\'';
      std::string body;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == close) {
          if (i + 1 < text.size() && text[i + 1] == close) {
            body.push_back(close);
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        body.push_back(text[i++]);
      }
      if (!closed) throw SyntaxError(start, "closing quote", "");
      out.push_back({Tok::kString, std::move(body), start});
      continue;
    }
    static constexpr std::string_view kTwo[] = {"!=", "<>", "<=", ">="};
    bool matched = false;
    for (auto op : kTwo) {
      if (text.substr(i, 2) == op) {
        out.push_back({Tok::kSymbol, std::string(op), start});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static constexpr std::string_view kOne = "=<>(),*;+-/.%|";
    if (kOne.find(c) != std::string_view::npos) {
      out.push_back({Tok::kSymbol, std::string(1, c), start});
      ++i;
      continue;
    }
    throw SyntaxError(start, "token", std::string(1, c));
  }
  out.push_back({Tok::kEnd, "", text.size()});
  return out;
}

std::string describe(const Token& token) {
  switch (token.kind) {
    case Tok::kEnd:
      return "";
    case Tok::kString:
      return "'" + token.text + "'";
    default:
      return token.text;
  }
}

}  // namespace vizforge::detail
