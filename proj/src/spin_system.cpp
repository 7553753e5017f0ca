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

#include "popsim/spin_system.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "popsim/errors.hpp"

namespace popsim {

int SpinSystem::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names[static_cast<std::size_t>(i)] == name) return i;
  throw UserError("unknown spin " + name);
}

double SpinSystem::primary_coupling_hz() const {
  if (size() < 2) throw UserError("J is undefined for a single spin");
  return j_hz[0][1];
}

void SpinSystem::validate() const {
  const std::size_t n = names.size();
  if (n < 1 || n > static_cast<std::size_t>(kMaxSpins))
    throw UserError("spin count must be between 1 and " +
                    std::to_string(kMaxSpins));
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (name.empty()) throw UserError("empty spin name");
    if (!seen.insert(name).second) throw UserError("duplicate spin " + name);
  }
  if (gamma_ratio.size() != n || offset_hz.size() != n || t2_s.size() != n ||
      j_hz.size() != n)
    throw UserError("spin-system arrays must all have length n");
  if (gamma_ratio[0] != 1.0) throw UserError("gamma_ratio[0] must be 1");
  for (double g : gamma_ratio)
    if (g == 0.0 || !std::isfinite(g)) throw UserError("gamma ratios must be nonzero");
  for (double t2 : t2_s)
    if (!(t2 > 0.0)) throw UserError("t2_s entries must be positive");
  for (std::size_t k = 0; k < n; ++k) {
    if (j_hz[k].size() != n) throw UserError("j_hz must be n x n");
    if (j_hz[k][k] != 0.0) throw UserError("j_hz diagonal must be zero");
    for (std::size_t l = 0; l < k; ++l)
      if (j_hz[k][l] != j_hz[l][k]) throw UserError("j_hz must be symmetric");
  }
}

bool is_preset(const std::string& name) {
  return name == "chloroform" || name == "chloroform-ratio4" ||
         name == "chloroform-physical";
}

SpinSystem preset(const std::string& name) {
  if (!is_preset(name)) throw UserError("unknown spin-system preset " + name);
  SpinSystem sys;
  sys.names = {"I", "S"};
  sys.gamma_ratio = {1.0, name == "chloroform-physical" ? 3.976 : 4.0};
  sys.offset_hz = {0.0, 0.0};
  sys.j_hz = {{0.0, 200.0}, {200.0, 0.0}};
  sys.t2_s = {0.5, 0.5};
  return sys;
}

SpinSystem spin_system_from_json(const nlohmann::json& j) {
  SpinSystem sys;
  try {
    sys.names = j.at("names").get<std::vector<std::string>>();
    const std::size_t n = sys.names.size();
    if (j.contains("n") && j.at("n").get<std::size_t>() != n)
      throw UserError("n does not match the number of names");
    sys.gamma_ratio = j.at("gamma_ratio").get<std::vector<double>>();
    sys.offset_hz = j.value("offset_hz", std::vector<double>(n, 0.0));
    sys.j_hz = j.value("j_hz", std::vector<std::vector<double>>(
                                   n, std::vector<double>(n, 0.0)));
    sys.t2_s = j.value("t2_s", std::vector<double>(n, 0.5));
  } catch (const nlohmann::json::exception& e) {
    throw UserError(std::string("invalid spin-system config: ") + e.what());
  }
  sys.validate();
  return sys;
}

nlohmann::json to_json(const SpinSystem& sys) {
  return nlohmann::json{{"n", sys.size()},
                        {"names", sys.names},
                        {"gamma_ratio", sys.gamma_ratio},
                        {"offset_hz", sys.offset_hz},
                        {"j_hz", sys.j_hz},
                        {"t2_s", sys.t2_s}};
}

SpinSystem load_spin_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read spin-system file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UserError("malformed spin-system file " + path + ": " + e.what());
  }
  return spin_system_from_json(j);
}

ComplexMatrix internal_hamiltonian(const SpinSystem& sys, bool include_offsets) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const int n = sys.size();
  ComplexMatrix h = ComplexMatrix::Zero(sys.dim(), sys.dim());
  if (include_offsets)
    for (int k = 0; k < n; ++k)
      h += kTwoPi * sys.offset_hz[static_cast<std::size_t>(k)] *
           spin_operator(n, k, Label::Z);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      const double j = sys.j_hz[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
      if (j != 0.0)
        h += kTwoPi * j * spin_operator(n, k, Label::Z) *
             spin_operator(n, l, Label::Z);
    }
  return h;
}

DeviationState equilibrium_deviation(const SpinSystem& sys) {
  const int n = sys.size();
  DeviationState state;
  state.rho = ComplexMatrix::Zero(sys.dim(), sys.dim());
  for (int k = 0; k < n; ++k)
    state.rho += sys.gamma_ratio[static_cast<std::size_t>(k)] *
                 spin_operator(n, k, Label::Z);
  state.identity_coeff = 1.0 / static_cast<double>(sys.dim());
  return state;
}

ComplexMatrix pseudo_pure_target(int ket, int spins) {
  if (spins < 1 || spins > kMaxSpins) throw UserError("spin count out of range");
  const Eigen::Index dim = Eigen::Index{1} << spins;
  if (ket < 0 || ket >= dim)
    throw UserError("basis ket " + std::to_string(ket) + " out of range");
  ComplexMatrix out = -0.5 * ComplexMatrix::Identity(dim, dim);
  out(ket, ket) += std::ldexp(1.0, spins - 1);
  return out;
}

}  // namespace popsim
