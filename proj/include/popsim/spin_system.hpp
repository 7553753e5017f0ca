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
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "popsim/operator_algebra.hpp"

namespace popsim {

/// A weakly coupled spin-1/2 system in the doubly rotating frame.
/// Frequencies are in Hz; the Hamiltonians built from it are in rad/s.
struct SpinSystem {
  std::vector<std::string> names;
  /// gamma_k / gamma_0; entry 0 is 1.
  std::vector<double> gamma_ratio;
  std::vector<double> offset_hz;
  /// Symmetric, zero diagonal.
  std::vector<std::vector<double>> j_hz;
  /// Decay constants applied only during detection.
  std::vector<double> t2_s;

  int size() const { return static_cast<int>(names.size()); }
  Eigen::Index dim() const { return Eigen::Index{1} << names.size(); }

  /// Index of the named spin; throws UserError("unknown spin ...").
  int index_of(const std::string& name) const;

  /// Coupling between spins 0 and 1 (the "J" of sequence expressions).
  double primary_coupling_hz() const;

  /// Throws UserError describing the first violated invariant.
  void validate() const;
};

/// Deviation part of a density operator with the identity bookkeeping kept
/// aside. No channel ever modifies identity_coeff.
struct DeviationState {
  ComplexMatrix rho;
  double identity_coeff = 0.0;
};

/// "chloroform" / "chloroform-ratio4" (gamma ratio exactly 4) or
/// "chloroform-physical" (3.976). J = 200 Hz, on resonance, T2 = 0.5 s.
SpinSystem preset(const std::string& name);
bool is_preset(const std::string& name);

SpinSystem spin_system_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SpinSystem& sys);
/// Reads a JSON spin-system file; IoError when unreadable.
SpinSystem load_spin_system(const std::string& path);

/// sum_k 2 pi offset_k I_kz [if include_offsets] + sum_{k<l} 2 pi J_kl I_kz I_lz
ComplexMatrix internal_hamiltonian(const SpinSystem& sys, bool include_offsets);

/// sum_k gamma_ratio[k] I_kz, identity coefficient 1/2^n.
DeviationState equilibrium_deviation(const SpinSystem& sys);

/// 2^(n-1) |ket><ket| - 1/2: for two spins and ket 0 this is Iz + Sz + 2IzSz.
ComplexMatrix pseudo_pure_target(int ket, int spins);

}  // namespace popsim
