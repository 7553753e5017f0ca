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

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "popsim/evolution.hpp"

namespace popsim {

struct SourcePos {
  int line = 1;
  int column = 1;
};

/// Arithmetic over numbers, pi, the coupling J and named parameters.
/// Children are shared and immutable, so copies are cheap.
struct Expr {
  enum class Kind { Number, Pi, Coupling, Param, Neg, Add, Sub, Mul, Div };

  Kind kind = Kind::Number;
  double value = 0.0;
  std::string name;
  std::shared_ptr<const Expr> lhs;
  std::shared_ptr<const Expr> rhs;

  static Expr number(double v);
  static Expr pi();
  static Expr coupling();
  static Expr param(std::string name);
  static Expr negate(Expr operand);
  static Expr binary(Kind op, Expr lhs, Expr rhs);

  /// Parameter names referenced anywhere in the expression.
  void collect_params(std::set<std::string>& out) const;

  friend bool operator==(const Expr& a, const Expr& b);
};

std::string to_string(const Expr& e);

using Bindings = std::map<std::string, double>;

/// Evaluates with J in Hz (pass NaN when no coupling is available) and the
/// given parameter values. Throws UserError on an unbound parameter or a
/// division by zero.
double evaluate(const Expr& e, double j_hz, const Bindings& bindings);

struct SpinRef {
  std::string name;
  SourcePos pos;
};

struct PulseItem {
  Expr angle;
  std::vector<SpinRef> targets;
  double phase_deg = 0.0;
  SourcePos pos;
};

struct DelayItem {
  Expr duration;
  SourcePos pos;
};

struct GradientItem {
  double strength = 1.0;
  SourcePos pos;
};

struct SpinLockItem {
  SpinRef target;
  Axis axis = Axis::X;
  SourcePos pos;
};

using SequenceItem = std::variant<PulseItem, DelayItem, GradientItem, SpinLockItem>;

/// Structural equality; source positions are ignored.
bool same_item(const SequenceItem& a, const SequenceItem& b);

struct PulseSequence {
  std::vector<SequenceItem> items;

  /// Free parameter names that must be bound before compiling.
  std::set<std::string> parameters() const;

  friend bool operator==(const PulseSequence& a, const PulseSequence& b);
};

/// Parses sequence source. Throws ParseError with a 1-based position.
PulseSequence parse_sequence(std::string_view text);

/// Parses a standalone expression, e.g. the value side of "phi=2pi".
Expr parse_expression(std::string_view text);

/// Canonical rendering: items joined by " ; ". Reparses to an equal sequence.
std::string to_string(const PulseSequence& seq);
std::string to_string(const SequenceItem& item);

}  // namespace popsim
