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

#include "popsim/evolution.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "popsim/errors.hpp"

namespace popsim {

char to_char(Axis axis) {
  switch (axis) {
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    case Axis::Z: return 'z';
  }
  return '?';
}

Label to_label(Axis axis) {
  switch (axis) {
    case Axis::X: return Label::X;
    case Axis::Y: return Label::Y;
    case Axis::Z: return Label::Z;
  }
  return Label::E;
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_dim(const ComplexMatrix& op, const ComplexMatrix& rho) {
  if (op.rows() != rho.rows() || rho.rows() != rho.cols())
    throw ContractError("channel dimension " + std::to_string(op.rows()) +
                        " does not match state dimension " +
                        std::to_string(rho.rows()));
}

ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& rho) {
  check_dim(u, rho);
  return u * rho * u.adjoint();
}

ComplexMatrix project(const AxisProjection& p, const ComplexMatrix& rho) {
  const int n = spin_count_for_dim(rho.rows());
  if (p.target < 0 || p.target >= n)
    throw ContractError("spin-lock target outside the state's spin count");
  // (rho + P rho P) / 2 with P the Pauli matrix of the lock axis keeps the
  // e and lock-axis labels on the target and cancels the other two.
  const ComplexMatrix pauli = 2.0 * spin_operator(n, p.target, to_label(p.axis));
  return 0.5 * (rho + pauli * rho * pauli);
}

/// Weighted m_z of each computational basis state: sum_k w_k (+-1/2).
std::vector<double> weighted_mz(const std::vector<double>& weights, int n) {
  if (static_cast<int>(weights.size()) != n)
    throw ContractError("gradient weights do not match the spin count");
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> out(dim, 0.0);
  for (std::size_t r = 0; r < dim; ++r)
    for (int k = 0; k < n; ++k) {
      const bool down = (r >> (n - 1 - k)) & 1U;
      out[r] += weights[static_cast<std::size_t>(k)] * (down ? -0.5 : 0.5);
    }
  return out;
}

ComplexMatrix encode(const std::vector<double>& mz, double theta,
                     const ComplexMatrix& rho) {
  ComplexMatrix out = rho;
  for (Eigen::Index r = 0; r < rho.rows(); ++r)
    for (Eigen::Index c = 0; c < rho.cols(); ++c)
      out(r, c) *= std::polar(1.0, -theta * (mz[static_cast<std::size_t>(r)] -
                                             mz[static_cast<std::size_t>(c)]));
  return out;
}

ComplexMatrix average_sliced(const PhaseAverage& avg, const ComplexMatrix& rho) {
  const int n = spin_count_for_dim(rho.rows());
  std::vector<std::vector<double>> mz;
  for (const auto& step : avg.body)
    mz.push_back(std::holds_alternative<GradientStep>(step)
                     ? weighted_mz(std::get<GradientStep>(step).weights, n)
                     : std::vector<double>{});

  ComplexMatrix sum = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (int m = 0; m < avg.slices; ++m) {
    const double theta = 2.0 * std::numbers::pi * m / avg.slices;
    ComplexMatrix slice = rho;
    for (std::size_t i = 0; i < avg.body.size(); ++i) {
      std::visit(Overloaded{
                     [&](const UnitaryStep& s) { slice = conjugate_by(s.u, slice); },
                     [&](const GradientStep&) { slice = encode(mz[i], theta, slice); },
                     [&](const AxisProjection& p) { slice = project(p, slice); },
                 },
                 avg.body[i]);
    }
    sum += slice;
  }
  return sum / static_cast<double>(avg.slices);
}

// Components of the position-resolved state keyed by accumulated weighted
// coherence order; theta enters only as exp(-i theta order).
using OrderComponents = std::vector<std::pair<double, ComplexMatrix>>;

constexpr double kOrderTol = 1e-9;

void add_component(OrderComponents& comps, double order, ComplexMatrix m) {
  for (auto& [o, acc] : comps)
    if (std::abs(o - order) < kOrderTol) {
      acc += m;
      return;
    }
  comps.emplace_back(order, std::move(m));
}

ComplexMatrix average_exact(const PhaseAverage& avg, const ComplexMatrix& rho) {
  const int n = spin_count_for_dim(rho.rows());
  OrderComponents comps{{0.0, rho}};
  for (const auto& step : avg.body) {
    if (const auto* g = std::get_if<GradientStep>(&step)) {
      const auto mz = weighted_mz(g->weights, n);
      OrderComponents next;
      for (const auto& [order, m] : comps)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
          for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (m(r, c) == Complex{}) continue;
            ComplexMatrix single = ComplexMatrix::Zero(m.rows(), m.cols());
            single(r, c) = m(r, c);
            add_component(next,
                          order + mz[static_cast<std::size_t>(r)] -
                              mz[static_cast<std::size_t>(c)],
                          std::move(single));
          }
      comps = std::move(next);
    } else if (const auto* u = std::get_if<UnitaryStep>(&step)) {
      for (auto& [order, m] : comps) m = conjugate_by(u->u, m);
    } else {
      for (auto& [order, m] : comps) m = project(std::get<AxisProjection>(step), m);
    }
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& [order, m] : comps)
    if (std::abs(order) < kOrderTol) out += m;
  return out;
}

void collect_unitary(const Channel& ch, ComplexMatrix& acc) {
  std::visit(Overloaded{
                 [&](const UnitaryStep& s) {
                   if (s.u.rows() != acc.rows())
                     throw ContractError("propagator dimension mismatch");
                   acc = s.u * acc;
                 },
                 [&](const Composite& c) {
                   for (const auto& part : c.parts) collect_unitary(part, acc);
                 },
                 [&](const auto&) {
                   throw ContractError(
                       "sequence contains a non-unitary item (gradient or "
                       "spin-lock); no propagator exists");
                 },
             },
             ch.kind);
}

}  // namespace

bool Channel::is_unitary() const {
  if (std::holds_alternative<UnitaryStep>(kind)) return true;
  if (const auto* c = std::get_if<Composite>(&kind)) {
    for (const auto& p : c->parts)
      if (!p.is_unitary()) return false;
    return true;
  }
  return false;
}

Channel unitary_channel(ComplexMatrix u) {
  if (!is_unitary(u, 1e-10)) throw ContractError("matrix is not unitary");
  return Channel{UnitaryStep{std::move(u)}};
}

Channel pulse_propagator(const SpinSystem& sys, const std::vector<int>& targets,
                         double angle, double phase_deg) {
  if (targets.empty()) throw UserError("pulse needs at least one target spin");
  if (!std::isfinite(angle) || !std::isfinite(phase_deg))
    throw UserError("pulse angle and phase must be finite");
  const int n = sys.size();
  const double phi = phase_deg * std::numbers::pi / 180.0;
  ComplexMatrix g = ComplexMatrix::Zero(sys.dim(), sys.dim());
  for (int k : targets) {
    if (k < 0 || k >= n) throw UserError("pulse target out of range");
    g += std::cos(phi) * spin_operator(n, k, Label::X) +
         std::sin(phi) * spin_operator(n, k, Label::Y);
  }
  return unitary_channel(expm_unitary(g, angle));
}

Channel pulse_propagator(const SpinSystem& sys,
                         const std::vector<std::string>& targets, double angle,
                         double phase_deg) {
  std::vector<int> idx;
  for (const auto& name : targets) idx.push_back(sys.index_of(name));
  return pulse_propagator(sys, idx, angle, phase_deg);
}

Channel delay_propagator(const SpinSystem& sys, double duration_s,
                         bool include_offsets) {
  if (!(duration_s >= 0.0)) throw UserError("delay duration must be nonnegative");
  return unitary_channel(
      expm_unitary(internal_hamiltonian(sys, include_offsets), duration_s));
}

Channel gradient_channel(const SpinSystem& sys, int slices, double strength) {
  if (slices != kExactSlices && slices < 2)
    throw UserError("gradient needs at least 2 slices");
  GradientStep step;
  for (double g : sys.gamma_ratio) step.weights.push_back(g * strength);
  return Channel{PhaseAverage{{std::move(step)}, slices}};
}

Channel spinlock_channel(const SpinSystem& sys, int target, Axis axis) {
  if (axis == Axis::Z) throw UserError("spin-lock axis must be x or y");
  if (target < 0 || target >= sys.size())
    throw UserError("spin-lock target out of range");
  return Channel{AxisProjection{target, axis}};
}

ComplexMatrix ApplyFn::operator()(const Channel& ch, const ComplexMatrix& rho) const {
  return std::visit(
      Overloaded{
          [&](const UnitaryStep& s) { return conjugate_by(s.u, rho); },
          [&](const AxisProjection& p) { return project(p, rho); },
          [&](const PhaseAverage& a) {
            if (a.slices < 0 || a.slices == 1)
              throw ContractError("phase average needs >= 2 slices or exact");
            return a.slices == kExactSlices ? average_exact(a, rho)
                                            : average_sliced(a, rho);
          },
          [&](const Composite& c) {
            ComplexMatrix out = rho;
            for (const auto& part : c.parts) out = apply(part, out);
            return out;
          },
      },
      ch.kind);
}

DeviationState ApplyFn::operator()(const Channel& ch, const DeviationState& state) const {
  return {apply(ch, state.rho), state.identity_coeff};
}

DeviationState ApplyFn::operator()(const std::vector<Channel>& channels,
                                   DeviationState state) const {
  for (const auto& ch : channels) state.rho = apply(ch, state.rho);
  return state;
}

ComplexMatrix propagator_of(const std::vector<Channel>& channels,
                            Eigen::Index dim) {
  ComplexMatrix acc = ComplexMatrix::Identity(dim, dim);
  for (const auto& ch : channels) collect_unitary(ch, acc);
  return acc;
}

}  // namespace popsim
