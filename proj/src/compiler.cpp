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

#include "popsim/compiler.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>

#include "popsim/errors.hpp"

namespace popsim {

int parse_slices(std::string_view text) {
  if (text == "exact") return kExactSlices;
  int value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || value < 2)
    throw UserError("slices must be 'exact' or an integer >= 2, got '" +
                    std::string(text) + "'");
  return value;
}

CompileOptions compile_options_from_env() {
  CompileOptions opts;
  if (const char* env = std::getenv("POPSIM_SLICES"); env && *env)
    opts.slices = parse_slices(env);
  return opts;
}

namespace {

int resolve_spin(const SpinSystem& sys, const SpinRef& ref) {
  for (int i = 0; i < sys.size(); ++i)
    if (sys.names[static_cast<std::size_t>(i)] == ref.name) return i;
  throw ParseError("unknown spin " + ref.name, ref.pos.line, ref.pos.column, ref.name);
}

double coupling_or_nan(const SpinSystem& sys) {
  return sys.size() >= 2 ? sys.primary_coupling_hz()
                         : std::numeric_limits<double>::quiet_NaN();
}

Channel pulse_channel(const PulseItem& p, const SpinSystem& sys, const Bindings& b) {
  std::vector<int> targets;
  for (const auto& t : p.targets) targets.push_back(resolve_spin(sys, t));
  return pulse_propagator(sys, targets, evaluate(p.angle, coupling_or_nan(sys), b),
                          p.phase_deg);
}

Channel delay_channel(const DelayItem& d, const SpinSystem& sys, const Bindings& b) {
  const double t = evaluate(d.duration, coupling_or_nan(sys), b);
  if (t < 0.0)
    throw UserError(std::to_string(d.pos.line) + ":" + std::to_string(d.pos.column) +
                    ": delay " + to_string(d.duration) + " evaluates to a negative duration");
  return delay_propagator(sys, t);
}

}  // namespace

void check_spins(const PulseSequence& seq, const SpinSystem& sys) {
  for (const auto& item : seq.items) {
    if (const auto* p = std::get_if<PulseItem>(&item))
      for (const auto& t : p->targets) resolve_spin(sys, t);
    if (const auto* l = std::get_if<SpinLockItem>(&item)) resolve_spin(sys, l->target);
  }
}

std::vector<Channel> compile(const PulseSequence& seq, const SpinSystem& sys,
                             const Bindings& bindings, const CompileOptions& options) {
  check_spins(seq, sys);
  std::vector<std::size_t> gradients;
  for (std::size_t i = 0; i < seq.items.size(); ++i)
    if (std::holds_alternative<GradientItem>(seq.items[i])) gradients.push_back(i);

  std::vector<Channel> out;
  std::size_t i = 0;
  while (i < seq.items.size()) {
    if (gradients.size() >= 2 && i == gradients.front()) {
      PhaseAverage avg;
      avg.slices = options.slices;
      for (; i <= gradients.back(); ++i) {
        const auto& item = seq.items[i];
        if (const auto* p = std::get_if<PulseItem>(&item)) {
          avg.body.push_back(std::get<UnitaryStep>(pulse_channel(*p, sys, bindings).kind));
        } else if (const auto* d = std::get_if<DelayItem>(&item)) {
          avg.body.push_back(std::get<UnitaryStep>(delay_channel(*d, sys, bindings).kind));
        } else if (const auto* g = std::get_if<GradientItem>(&item)) {
          GradientStep step;
          for (double gamma : sys.gamma_ratio) step.weights.push_back(gamma * g->strength);
          avg.body.push_back(std::move(step));
        } else {
          const auto& l = std::get<SpinLockItem>(item);
          avg.body.push_back(AxisProjection{resolve_spin(sys, l.target), l.axis});
        }
      }
      out.push_back(Channel{std::move(avg)});
      continue;
    }
    const auto& item = seq.items[i];
    if (const auto* p = std::get_if<PulseItem>(&item)) {
      out.push_back(pulse_channel(*p, sys, bindings));
    } else if (const auto* d = std::get_if<DelayItem>(&item)) {
      out.push_back(delay_channel(*d, sys, bindings));
    } else if (const auto* g = std::get_if<GradientItem>(&item)) {
      out.push_back(gradient_channel(sys, options.slices, g->strength));
    } else {
      const auto& l = std::get<SpinLockItem>(item);
      out.push_back(spinlock_channel(sys, resolve_spin(sys, l.target), l.axis));
    }
    ++i;
  }
  return out;
}

ComplexMatrix propagator_of(const SpinSystem& sys, const PulseSequence& seq,
                            const Bindings& bindings) {
  for (const auto& item : seq.items)
    if (std::holds_alternative<GradientItem>(item) ||
        std::holds_alternative<SpinLockItem>(item))
      throw ContractError(
          "sequence contains a non-unitary item (gradient or spin-lock); no "
          "propagator exists");
  return propagator_of(compile(seq, sys, bindings), sys.dim());
}

// ----------------------------------------------------------------------------
// Canned experiments

namespace {

std::string hadamard_on(const std::string& spin) {
  return "[pi/4]^" + spin + "_y ; [pi]^" + spin + "_x ; [pi/4]^" + spin + "_-y";
}

// Conditional phase diag(1,1,1,i): the 7/(4J) coupling delay equals
// exp(+i (pi/2) IzSz) up to a global sign, then a -pi/4 z-rotation of both
// spins built from x/y pulses.
constexpr std::string_view kB01 =
    "(7/(4*J)) ; [pi/2]^{I,S}_x ; [pi/4]^{I,S}_-y ; [pi/2]^{I,S}_-x";

const std::map<std::string, std::string, std::less<>>& library() {
  static const std::map<std::string, std::string, std::less<>> kLibrary = {
      {"equalize",
       "[pi/2]^{I,S}_x ; (1/(4*J)) ; [pi/2]^{I,S}_y ; (1/(4*J)) ; "
       "[pi/2]^{I,S}_-x ; grad(z)"},
      {"pseudo_pure", "[pi/4]^{I,S}_x ; (1/(2*J)) ; [pi/6]^{I,S}_-y ; grad(z)"},
      {"spinor_prep", "[pi/2]^I_x ; grad(z) ; [pi/2]^S_x ; (1/(2*J))"},
      {"spinor_rot", "[phi/2]^I_y ; [pi/2]^I_-x ; (phi/(2*pi*J)) ; [pi/2]^I_x"},
      {"bell_prep",
       "[pi/2]^S_-x ; [pi/2]^I_y ; (1/(2*J)) ; [pi/2]^I_-y ; [pi/2]^S_x"},
      {"measure_x",
       "[pi/2]^I_y ; grad(z) ; [pi]^S_y ; grad(z) ; [pi/2]^I_-y"},
      {"epr_mixture",
       "[pi/2]^S_90deg ; (1/(2*J)) ; [pi/2]^I_135deg ; (1/(2*J)) ; "
       "[pi/2]^S_90deg"},
      {"cnot", "[pi/2]^S_y ; [pi/2]^S_-x ; (1/(2*J)) ; [pi/2]^S_x"},
      {"hadamard", hadamard_on("I")},
      {"b01", std::string(kB01)},
      {"qft2", hadamard_on("S") + " ; " + std::string(kB01) + " ; " + hadamard_on("I")},
  };
  return kLibrary;
}

}  // namespace

std::string canned_source(std::string_view name) {
  // hadamard(<spin>) targets any spin label.
  constexpr std::string_view kHad = "hadamard(";
  if (name.starts_with(kHad) && name.ends_with(")") && name.size() > kHad.size() + 1) {
    const std::string spin(name.substr(kHad.size(), name.size() - kHad.size() - 1));
    const bool ident = std::isalpha(static_cast<unsigned char>(spin[0])) &&
                       std::all_of(spin.begin(), spin.end(), [](char c) {
                         return std::isalnum(static_cast<unsigned char>(c));
                       });
    if (!ident) throw UserError("invalid spin name in " + std::string(name));
    return hadamard_on(spin);
  }
  auto it = library().find(name);
  if (it == library().end())
    throw UserError("unknown canned sequence " + std::string(name));
  return it->second;
}

bool is_canned(std::string_view name) {
  try {
    canned_source(name);
    return true;
  } catch (const UserError&) {
    return false;
  }
}

PulseSequence canned(std::string_view name) { return parse_sequence(canned_source(name)); }

std::vector<std::string> canned_names() {
  std::vector<std::string> out;
  for (const auto& [name, src] : library()) out.push_back(name);
  return out;
}

}  // namespace popsim
