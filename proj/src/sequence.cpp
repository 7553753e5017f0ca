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

#include "popsim/sequence.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <system_error>

#include "popsim/errors.hpp"

namespace popsim {

// ----------------------------------------------------------------------------
// Expressions

Expr Expr::number(double v) {
  Expr e;
  e.kind = Kind::Number;
  e.value = v;
  return e;
}

Expr Expr::pi() {
  Expr e;
  e.kind = Kind::Pi;
  return e;
}

Expr Expr::coupling() {
  Expr e;
  e.kind = Kind::Coupling;
  return e;
}

Expr Expr::param(std::string name) {
  Expr e;
  e.kind = Kind::Param;
  e.name = std::move(name);
  return e;
}

Expr Expr::negate(Expr operand) {
  Expr e;
  e.kind = Kind::Neg;
  e.lhs = std::make_shared<const Expr>(std::move(operand));
  return e;
}

Expr Expr::binary(Kind op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = op;
  e.lhs = std::make_shared<const Expr>(std::move(lhs));
  e.rhs = std::make_shared<const Expr>(std::move(rhs));
  return e;
}

void Expr::collect_params(std::set<std::string>& out) const {
  if (kind == Kind::Param) out.insert(name);
  if (lhs) lhs->collect_params(out);
  if (rhs) rhs->collect_params(out);
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Number: return a.value == b.value;
    case Expr::Kind::Pi:
    case Expr::Kind::Coupling: return true;
    case Expr::Kind::Param: return a.name == b.name;
    case Expr::Kind::Neg: return *a.lhs == *b.lhs;
    default: return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
  }
}

namespace {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    default: return 4;
  }
}

char op_char(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add: return '+';
    case Expr::Kind::Sub: return '-';
    case Expr::Kind::Mul: return '*';
    default: return '/';
  }
}

// Operators are left-associative, so a right operand of equal precedence
// needs parentheses to keep its grouping.
void print_expr(const Expr& e, int parent_prec, bool right_operand, std::string& out) {
  const int prec = precedence(e.kind);
  const bool parens = prec < parent_prec || (right_operand && prec == parent_prec);
  if (parens) out += '(';
  switch (e.kind) {
    case Expr::Kind::Number: out += format_number(e.value); break;
    case Expr::Kind::Pi: out += "pi"; break;
    case Expr::Kind::Coupling: out += "J"; break;
    case Expr::Kind::Param: out += e.name; break;
    case Expr::Kind::Neg:
      out += '-';
      print_expr(*e.lhs, prec, false, out);
      break;
    default:
      print_expr(*e.lhs, prec, false, out);
      out += op_char(e.kind);
      print_expr(*e.rhs, prec, true, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print_expr(e, 0, false, out);
  return out;
}

double evaluate(const Expr& e, double j_hz, const Bindings& bindings) {
  switch (e.kind) {
    case Expr::Kind::Number: return e.value;
    case Expr::Kind::Pi: return std::numbers::pi;
    case Expr::Kind::Coupling:
      if (std::isnan(j_hz)) throw UserError("J is undefined for this spin system");
      return j_hz;
    case Expr::Kind::Param: {
      auto it = bindings.find(e.name);
      if (it == bindings.end()) throw UserError("unbound parameter " + e.name);
      return it->second;
    }
    case Expr::Kind::Neg: return -evaluate(*e.lhs, j_hz, bindings);
    case Expr::Kind::Add:
      return evaluate(*e.lhs, j_hz, bindings) + evaluate(*e.rhs, j_hz, bindings);
    case Expr::Kind::Sub:
      return evaluate(*e.lhs, j_hz, bindings) - evaluate(*e.rhs, j_hz, bindings);
    case Expr::Kind::Mul:
      return evaluate(*e.lhs, j_hz, bindings) * evaluate(*e.rhs, j_hz, bindings);
    case Expr::Kind::Div: {
      const double d = evaluate(*e.rhs, j_hz, bindings);
      if (d == 0.0) throw UserError("division by zero in " + to_string(e));
      return evaluate(*e.lhs, j_hz, bindings) / d;
    }
  }
  return 0.0;
}

// ----------------------------------------------------------------------------
// Items

namespace {

bool same_spins(const std::vector<SpinRef>& a, const std::vector<SpinRef>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name) return false;
  return true;
}

}  // namespace

bool same_item(const SequenceItem& a, const SequenceItem& b) {
  if (a.index() != b.index()) return false;
  if (const auto* p = std::get_if<PulseItem>(&a)) {
    const auto& q = std::get<PulseItem>(b);
    return p->angle == q.angle && same_spins(p->targets, q.targets) &&
           p->phase_deg == q.phase_deg;
  }
  if (const auto* d = std::get_if<DelayItem>(&a))
    return d->duration == std::get<DelayItem>(b).duration;
  if (const auto* g = std::get_if<GradientItem>(&a))
    return g->strength == std::get<GradientItem>(b).strength;
  const auto& l = std::get<SpinLockItem>(a);
  const auto& m = std::get<SpinLockItem>(b);
  return l.target.name == m.target.name && l.axis == m.axis;
}

std::set<std::string> PulseSequence::parameters() const {
  std::set<std::string> out;
  for (const auto& item : items) {
    if (const auto* p = std::get_if<PulseItem>(&item)) p->angle.collect_params(out);
    if (const auto* d = std::get_if<DelayItem>(&item)) d->duration.collect_params(out);
  }
  return out;
}

bool operator==(const PulseSequence& a, const PulseSequence& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i)
    if (!same_item(a.items[i], b.items[i])) return false;
  return true;
}

std::string to_string(const SequenceItem& item) {
  if (const auto* p = std::get_if<PulseItem>(&item)) {
    std::string out = "[" + to_string(p->angle) + "]^";
    if (p->targets.size() == 1) {
      out += p->targets[0].name;
    } else {
      out += '{';
      for (std::size_t i = 0; i < p->targets.size(); ++i) {
        if (i) out += ',';
        out += p->targets[i].name;
      }
      out += '}';
    }
    out += '_';
    if (p->phase_deg == 0.0) out += "x";
    else if (p->phase_deg == 90.0) out += "y";
    else if (p->phase_deg == 180.0) out += "-x";
    else if (p->phase_deg == 270.0) out += "-y";
    else out += format_number(p->phase_deg) + "deg";
    return out;
  }
  if (const auto* d = std::get_if<DelayItem>(&item))
    return "(" + to_string(d->duration) + ")";
  if (const auto* g = std::get_if<GradientItem>(&item))
    return g->strength == 1.0 ? std::string("grad(z)")
                              : "grad(z)*" + format_number(g->strength);
  const auto& l = std::get<SpinLockItem>(item);
  return "lock(" + l.target.name + "," + to_char(l.axis) + ")";
}

std::string to_string(const PulseSequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.items.size(); ++i) {
    if (i) out += " ; ";
    out += to_string(seq.items[i]);
  }
  return out;
}

// ----------------------------------------------------------------------------
// Lexer

namespace {

struct Token {
  enum class Type { Number, Ident, Symbol, End };
  Type type = Type::End;
  std::string text;
  double number = 0.0;
  SourcePos pos;
  /// True when no whitespace separates this token from the previous one.
  bool glued = false;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    bool glued = false;
    while (true) {
      const bool skipped = skip_space();
      glued = !skipped;
      if (at_end()) {
        Token t;
        t.type = Token::Type::End;
        t.pos = pos_;
        out.push_back(t);
        return out;
      }
      Token t = next();
      t.glued = glued;
      out.push_back(std::move(t));
    }
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }
  void advance() {
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }

  bool skip_space() {
    bool skipped = false;
    while (!at_end()) {
      const char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
        skipped = true;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        skipped = true;
      } else {
        break;
      }
    }
    return skipped;
  }

  Token next() {
    Token t;
    t.pos = pos_;
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      const std::size_t start = i_;
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') advance();
      // Exponent only when digits follow, so "2e" stays a number then ident.
      if ((peek() == 'e' || peek() == 'E') &&
          (std::isdigit(static_cast<unsigned char>(peek(1))) ||
           ((peek(1) == '-' || peek(1) == '+') &&
            std::isdigit(static_cast<unsigned char>(peek(2)))))) {
        advance();
        if (peek() == '-' || peek() == '+') advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
      t.type = Token::Type::Number;
      t.text = std::string(src_.substr(start, i_ - start));
      auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size())
        throw ParseError("malformed number", t.pos.line, t.pos.column, t.text);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = i_;
      while (std::isalnum(static_cast<unsigned char>(peek()))) advance();
      t.type = Token::Type::Ident;
      t.text = std::string(src_.substr(start, i_ - start));
      return t;
    }
    static constexpr std::string_view kSymbols = "[]^_{},;()*/+-";
    if (kSymbols.find(c) != std::string_view::npos) {
      advance();
      t.type = Token::Type::Symbol;
      t.text = std::string(1, c);
      return t;
    }
    throw ParseError("unexpected character", t.pos.line, t.pos.column,
                     std::string(1, c));
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

// ----------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(Lexer(src).run()) {}

  PulseSequence sequence() {
    PulseSequence seq;
    while (!at_end()) {
      seq.items.push_back(item());
      if (at_end()) break;
      expect_symbol(";", "expected ';' between sequence items");
    }
    return seq;
  }

  Expr standalone_expression() {
    Expr e = expr();
    if (!at_end()) fail("unexpected trailing input");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[i_]; }
  bool at_end() const { return peek().type == Token::Type::End; }
  const Token& take() { return tokens_[i_++]; }

  bool is_symbol(std::string_view s) const {
    return peek().type == Token::Type::Symbol && peek().text == s;
  }
  bool is_ident(std::string_view s) const {
    return peek().type == Token::Type::Ident && peek().text == s;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(msg, t.pos.line, t.pos.column,
                     t.type == Token::Type::End ? std::string("end of input") : t.text);
  }

  const Token& expect_symbol(std::string_view s, const std::string& msg) {
    if (!is_symbol(s)) fail(msg);
    return take();
  }

  const Token& expect_ident(const std::string& msg) {
    if (peek().type != Token::Type::Ident) fail(msg);
    return take();
  }

  SequenceItem item() {
    if (is_symbol("[")) return pulse();
    if (is_symbol("(")) return delay();
    if (is_ident("grad")) return gradient();
    if (is_ident("lock")) return spin_lock();
    fail("expected a pulse '[...]', delay '(...)', grad(z) or lock(...)");
  }

  PulseItem pulse() {
    PulseItem p;
    p.pos = take().pos;
    p.angle = expr();
    expect_symbol("]", "expected ']' after pulse angle");
    expect_symbol("^", "expected '^' before the pulse's spin list");
    if (is_symbol("{")) {
      take();
      do {
        add_target(p, expect_ident("expected a spin name"));
      } while (is_symbol(",") && (take(), true));
      expect_symbol("}", "expected '}' closing the spin list");
    } else {
      add_target(p, expect_ident("expected a spin name or '{'"));
    }
    expect_symbol("_", "expected '_' before the pulse phase");
    p.phase_deg = phase();
    return p;
  }

  void add_target(PulseItem& p, const Token& t) {
    for (const auto& existing : p.targets)
      if (existing.name == t.text)
        throw ParseError("duplicate spin " + t.text + " in spin list", t.pos.line,
                         t.pos.column, t.text);
    p.targets.push_back({t.text, t.pos});
  }

  double phase() {
    bool negative = false;
    if (is_symbol("-")) {
      take();
      negative = true;
    }
    if (is_ident("x")) {
      take();
      return negative ? 180.0 : 0.0;
    }
    if (is_ident("y")) {
      take();
      return negative ? 270.0 : 90.0;
    }
    if (peek().type == Token::Type::Number) {
      const double deg = take().number;
      if (!is_ident("deg")) fail("expected 'deg' after a numeric phase");
      take();
      return negative ? -deg : deg;
    }
    fail("expected a phase: x, y, -x, -y or <number>deg");
  }

  DelayItem delay() {
    DelayItem d;
    d.pos = take().pos;
    d.duration = expr();
    expect_symbol(")", "expected ')' closing the delay");
    return d;
  }

  GradientItem gradient() {
    GradientItem g;
    g.pos = take().pos;
    expect_symbol("(", "expected '(' after grad");
    if (!is_ident("z")) fail("gradient axis must be z");
    take();
    expect_symbol(")", "expected ')' after the gradient axis");
    if (is_symbol("*")) {
      take();
      if (peek().type != Token::Type::Number) fail("expected a gradient strength");
      g.strength = take().number;
    }
    return g;
  }

  SpinLockItem spin_lock() {
    SpinLockItem l;
    l.pos = take().pos;
    expect_symbol("(", "expected '(' after lock");
    const Token& spin = expect_ident("expected a spin name");
    l.target = {spin.text, spin.pos};
    expect_symbol(",", "expected ',' after the locked spin");
    if (is_ident("x")) l.axis = Axis::X;
    else if (is_ident("y")) l.axis = Axis::Y;
    else fail("spin-lock axis must be x or y");
    take();
    expect_symbol(")", "expected ')' closing lock(...)");
    return l;
  }

  Expr expr() {
    Expr lhs = term();
    while (is_symbol("+") || is_symbol("-")) {
      const auto op = take().text == "+" ? Expr::Kind::Add : Expr::Kind::Sub;
      lhs = Expr::binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (is_symbol("*") || is_symbol("/")) {
      const auto op = take().text == "*" ? Expr::Kind::Mul : Expr::Kind::Div;
      lhs = Expr::binary(op, std::move(lhs), unary());
    }
    return lhs;
  }

  Expr unary() {
    if (is_symbol("-")) {
      take();
      return Expr::negate(unary());
    }
    return primary();
  }

  Expr symbol(const Token& t) {
    if (t.text == "pi") return Expr::pi();
    if (t.text == "J") return Expr::coupling();
    return Expr::param(t.text);
  }

  Expr primary() {
    if (peek().type == Token::Type::Number) {
      Expr num = Expr::number(take().number);
      // "2pi" is 2*pi.
      if (peek().type == Token::Type::Ident && peek().glued)
        return Expr::binary(Expr::Kind::Mul, std::move(num), symbol(take()));
      return num;
    }
    if (peek().type == Token::Type::Ident) return symbol(take());
    if (is_symbol("(")) {
      take();
      Expr inner = expr();
      expect_symbol(")", "expected ')'");
      return inner;
    }
    fail("expected a number, pi, J, parameter or '('");
  }

  std::vector<Token> tokens_;
  std::size_t i_ = 0;
};

}  // namespace

PulseSequence parse_sequence(std::string_view text) {
  return Parser(text).sequence();
}

Expr parse_expression(std::string_view text) {
  return Parser(text).standalone_expression();
}

}  // namespace popsim
