// Copyright 2026 The popsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace popsim {

/// Bad input supplied by the user: unknown spin, unbound parameter,
/// out-of-range argument. Maps to exit code 2.
class UserError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in pulse-sequence source. Line and column are 1-based.
class ParseError : public UserError {
 public:
  ParseError(std::string message, int line, int column, std::string token)
      : UserError(format(message, line, column, token)),
        message_(std::move(message)),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& token() const { return token_; }

 private:
  static std::string format(const std::string& msg, int line, int col,
                            const std::string& tok) {
    std::string out = std::to_string(line) + ":" + std::to_string(col) +
                      ": " + msg;
    if (!tok.empty()) out += " (at '" + tok + "')";
    return out;
  }

  std::string message_;
  int line_;
  int column_;
  std::string token_;
};

/// File could not be read or written. Maps to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical contract was violated: dimension mismatch, non-Hermitian
/// generator, non-unitary item where a propagator was required.
/// Maps to exit code 4.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace popsim
