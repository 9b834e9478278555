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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vizforge {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LoadError : public Error {
 public:
  enum class Kind { kMissingManifest, kMalformedRow, kRoleMismatch, kUnreadable };

  LoadError(Kind kind, std::string file, std::size_t line, const std::string& reason)
      : Error(file + (line ? ":" + std::to_string(line) : std::string()) + ": " + reason),
        kind_(kind),
        file_(std::move(file)),
        line_(line) {}

  Kind kind() const { return kind_; }
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::string file_;
  std::size_t line_;
};

class UnknownColumn : public Error {
 public:
  explicit UnknownColumn(const std::string& name)
      : Error("unknown column '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class NotQuantitative : public Error {
 public:
  explicit NotQuantitative(const std::string& name)
      : Error("column '" + name + "' is not quantitative") {}
};

/// Parse failure with the byte offset where it happened and what was expected there.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& expected, const std::string& found)
      : Error("syntax error at " + std::to_string(position) + ": expected " + expected +
              ", found " + (found.empty() ? "end of input" : "'" + found + "'")),
        position_(position),
        expected_(expected) {}

  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class UnsupportedSql : public Error {
 public:
  explicit UnsupportedSql(std::string construct)
      : Error("unsupported SQL construct: " + construct), construct_(std::move(construct)) {}
  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class UnknownIdentifier : public Error {
 public:
  explicit UnknownIdentifier(const std::string& name)
      : Error("cannot resolve identifier '" + name + "'") {}
};

class TooManyColumns : public Error {
 public:
  explicit TooManyColumns(std::size_t n)
      : Error("query selects " + std::to_string(n) + " data columns; at most 3 can be encoded") {}
};

class DisconnectedJoin : public Error {
 public:
  explicit DisconnectedJoin(const std::string& table)
      : Error("table '" + table + "' is not connected to the join graph") {}
};

/// Raised by the engine only when it meets a query the validator should have rejected.
class ExecutionError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration or template file entry.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vizforge
