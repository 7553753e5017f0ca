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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "popsim/errors.hpp"
#include "popsim/spin_system.hpp"
#include "test_util.hpp"

using namespace popsim;

TEST_SUITE("spin_system") {

TEST_CASE("presets") {
  const SpinSystem s = preset("chloroform");
  CHECK(s.names == std::vector<std::string>{"I", "S"});
  CHECK(s.gamma_ratio[1] == 4.0);
  CHECK(s.primary_coupling_hz() == 200.0);
  CHECK(preset("chloroform-ratio4").gamma_ratio[1] == 4.0);
  CHECK(preset("chloroform-physical").gamma_ratio[1] == 3.976);
  CHECK_FALSE(is_preset("benzene"));
  CHECK_THROWS_AS(preset("benzene"), UserError);
}

TEST_CASE("spin lookup") {
  const SpinSystem s = preset("chloroform");
  CHECK(s.index_of("S") == 1);
  CHECK_THROWS_WITH_AS(s.index_of("Q"), "unknown spin Q", UserError);
}

TEST_CASE("coupling Hamiltonian eigenvalues are 2 pi J (+-1/4)") {
  const SpinSystem s = preset("chloroform");
  const ComplexMatrix h = internal_hamiltonian(s, false);
  const double q = 2.0 * std::numbers::pi * 200.0 / 4.0;
  CHECK(max_abs(h - testing::diag({q, -q, -q, q})) < 1e-12);
}

TEST_CASE("offsets enter only when requested") {
  SpinSystem s = preset("chloroform");
  s.offset_hz = {100.0, -50.0};
  const ComplexMatrix diff = internal_hamiltonian(s, true) - internal_hamiltonian(s, false);
  const double w0 = 2.0 * std::numbers::pi * 100.0, w1 = -2.0 * std::numbers::pi * 50.0;
  CHECK(max_abs(diff - testing::diag({(w0 + w1) / 2, (w0 - w1) / 2, (-w0 + w1) / 2,
                                      (-w0 - w1) / 2})) < 1e-9);
}

TEST_CASE("equilibrium deviation is Iz + 4 Sz") {
  const DeviationState eq = equilibrium_deviation(preset("chloroform"));
  const auto d = decompose(eq.rho);
  CHECK(d.coefficient("ze").real() == doctest::Approx(1.0));
  CHECK(d.coefficient("ez").real() == doctest::Approx(4.0));
  CHECK(eq.identity_coeff == 0.25);
}

TEST_CASE("pseudo-pure target") {
  const auto d = decompose(pseudo_pure_target(0, 2));
  for (const char* l : {"ze", "ez", "zz"}) CHECK(d.coefficient(l).real() == doctest::Approx(1.0));
  CHECK(std::abs(d.coefficient("ee")) < 1e-15);
  // |11> flips the single-spin terms.
  const auto d3 = decompose(pseudo_pure_target(3, 2));
  CHECK(d3.coefficient("ze").real() == doctest::Approx(-1.0));
  CHECK(d3.coefficient("zz").real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(pseudo_pure_target(4, 2), UserError);
}

TEST_CASE("json round trip and defaults") {
  const SpinSystem s = preset("chloroform-physical");
  const SpinSystem back = spin_system_from_json(to_json(s));
  CHECK(back.names == s.names);
  CHECK(back.gamma_ratio == s.gamma_ratio);
  CHECK(back.j_hz == s.j_hz);

  const auto j = nlohmann::json::parse(R"({"names": ["A", "B", "C"], "gamma_ratio": [1, 1, 2]})");
  const SpinSystem three = spin_system_from_json(j);
  CHECK(three.dim() == 8);
  CHECK(three.t2_s == std::vector<double>{0.5, 0.5, 0.5});
}

TEST_CASE("invalid configurations") {
  auto load = [](const char* text) { return spin_system_from_json(nlohmann::json::parse(text)); };
  CHECK_THROWS_AS(load(R"({"names": ["I", "S"], "gamma_ratio": [1]})"), UserError);
  CHECK_THROWS_AS(load(R"({"names": ["I", "I"], "gamma_ratio": [1, 4]})"), UserError);
  CHECK_THROWS_AS(load(R"({"names": ["I", "S"], "gamma_ratio": [2, 4]})"), UserError);
  CHECK_THROWS_AS(load(R"({"names": ["I", "S"], "gamma_ratio": [1, 4], "j_hz": [[0, 1], [2, 0]]})"),
                  UserError);
  CHECK_THROWS_AS(load(R"({"names": ["I", "S"], "gamma_ratio": [1, 4], "t2_s": [0.5, 0]})"),
                  UserError);
  CHECK_THROWS_AS(load(R"({"gamma_ratio": [1]})"), UserError);
  CHECK_THROWS_AS(load_spin_system("/nonexistent/system.json"), IoError);
}

TEST_CASE("diagonal forms") {
  using testing::diag;
  CHECK(max_abs(equilibrium_deviation(preset("chloroform")).rho - diag({2.5, -1.5, 1.5, -2.5})) < 1e-15);
  SpinSystem balanced = preset("chloroform");
  balanced.gamma_ratio = {1.0, 1.0};
  CHECK(max_abs(equilibrium_deviation(balanced).rho - diag({1.0, 0.0, 0.0, -1.0})) < 1e-15);
  CHECK(max_abs(pseudo_pure_target(0, 2) - diag({1.5, -0.5, -0.5, -0.5})) < 1e-15);
  CHECK(max_abs(pseudo_pure_target(0, 1) - diag({0.5, -0.5})) < 1e-15);
  SpinSystem off = preset("chloroform");
  off.j_hz = {{0.0, 0.0}, {0.0, 0.0}};
  CHECK(max_abs(internal_hamiltonian(off, true)) == 0.0);
}

}  // TEST_SUITE
