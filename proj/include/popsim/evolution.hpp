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

#include <variant>
#include <vector>

#include "popsim/operator_algebra.hpp"
#include "popsim/spin_system.hpp"

namespace popsim {

enum class Axis : std::uint8_t { X, Y, Z };

char to_char(Axis axis);
Label to_label(Axis axis);

/// Slice count that selects the analytic (infinite-average) gradient.
inline constexpr int kExactSlices = 0;
inline constexpr int kDefaultSlices = 64;

struct UnitaryStep {
  ComplexMatrix u;
};

/// Position-dependent phase exp(-i theta sum_k weights[k] I_kz). Only
/// meaningful inside a PhaseAverage, which supplies theta.
struct GradientStep {
  std::vector<double> weights;
};

/// Keeps the product-operator terms whose label on `target` is e or
/// `axis`; everything else is zeroed.
struct AxisProjection {
  int target;
  Axis axis;
};

using AveragedStep = std::variant<UnitaryStep, GradientStep, AxisProjection>;

/// Average over sample position theta of the evolution through `body`.
/// All gradient steps in one body see the same theta, so a later gradient
/// can refocus what an earlier one encoded. Finite slices use theta_m =
/// 2 pi m / slices; kExactSlices keeps exactly the order-zero part.
struct PhaseAverage {
  std::vector<AveragedStep> body;
  int slices = kDefaultSlices;
};

struct Channel;

/// Applied left to right.
struct Composite {
  std::vector<Channel> parts;
};

struct Channel {
  std::variant<UnitaryStep, PhaseAverage, AxisProjection, Composite> kind;

  bool is_unitary() const;
};

/// Wraps u after checking u^dagger u = 1 within 1e-10.
Channel unitary_channel(ComplexMatrix u);

/// exp(-i angle sum_{k in targets} (I_kx cos phi + I_ky sin phi)).
Channel pulse_propagator(const SpinSystem& sys, const std::vector<int>& targets,
                         double angle, double phase_deg);
Channel pulse_propagator(const SpinSystem& sys,
                         const std::vector<std::string>& targets, double angle,
                         double phase_deg);

/// Free evolution under the internal Hamiltonian; offsets are off by
/// default (doubly rotating frame).
Channel delay_propagator(const SpinSystem& sys, double duration_s,
                         bool include_offsets = false);

/// z-gradient: weights are gamma_ratio scaled by `strength`.
Channel gradient_channel(const SpinSystem& sys, int slices = kDefaultSlices,
                         double strength = 1.0);

/// Idealized on-resonance spin-lock; the z axis is rejected.
Channel spinlock_channel(const SpinSystem& sys, int target, Axis axis);

/// A function object rather than an overload set: unqualified calls then
/// never pick up std::apply through argument-dependent lookup.
struct ApplyFn {
  ComplexMatrix operator()(const Channel& ch, const ComplexMatrix& rho) const;
  DeviationState operator()(const Channel& ch, const DeviationState& state) const;
  DeviationState operator()(const std::vector<Channel>& channels, DeviationState state) const;
};
inline constexpr ApplyFn apply{};

/// Product of the unitaries, earliest item as the rightmost factor.
/// Throws ContractError if any channel is non-unitary.
ComplexMatrix propagator_of(const std::vector<Channel>& channels,
                            Eigen::Index dim);

}  // namespace popsim
