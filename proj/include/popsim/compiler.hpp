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

#include <string>
#include <string_view>
#include <vector>

#include "popsim/evolution.hpp"
#include "popsim/sequence.hpp"

namespace popsim {

struct CompileOptions {
  /// Gradient slice count, or kExactSlices for the analytic average.
  int slices = kDefaultSlices;
};

/// Reads POPSIM_SLICES ("exact" or an integer >= 2); defaults otherwise.
CompileOptions compile_options_from_env();

/// Parses a slice setting: "exact" or an integer >= 2.
int parse_slices(std::string_view text);

/// Maps each item to a channel in source order. When a sequence holds two
/// or more gradients, the items from the first to the last gradient become
/// one PhaseAverage so the gradients share the sample position.
/// Throws ParseError (positioned) for an unknown spin and UserError for an
/// unbound parameter or a negative delay.
std::vector<Channel> compile(const PulseSequence& seq, const SpinSystem& sys,
                             const Bindings& bindings = {},
                             const CompileOptions& options = {});

/// Propagator of a unitary-only sequence; ContractError otherwise.
ComplexMatrix propagator_of(const SpinSystem& sys, const PulseSequence& seq,
                            const Bindings& bindings = {});

/// Checks every spin label against the system without compiling.
void check_spins(const PulseSequence& seq, const SpinSystem& sys);

/// Sequences of the experiments, written for the two-spin system {I, S}:
/// equalize, pseudo_pure, spinor_prep, spinor_rot (parameter phi),
/// bell_prep, measure_x, epr_mixture, cnot, hadamard, hadamard(<spin>),
/// b01, qft2.
PulseSequence canned(std::string_view name);
std::string canned_source(std::string_view name);
bool is_canned(std::string_view name);
std::vector<std::string> canned_names();

}  // namespace popsim
