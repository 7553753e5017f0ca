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

#include "popsim/compiler.hpp"
#include "popsim/detection.hpp"
#include "popsim/errors.hpp"
#include "test_util.hpp"

using namespace popsim;

namespace {

constexpr double kPi = std::numbers::pi;

DeviationState state(const char* labels, double c = 1.0) {
  return {c * product_operator(labels_from_string(labels)), 0.25};
}

PeakTable table_for(const SpinSystem& sys, const DeviationState& st, int channel) {
  const Acquisition acq;
  return peaks(spectrum(observe_fid(sys, st, channel, resolved_points(sys, acq), resolved_dwell(sys, acq))),
               acq.threshold_rel);
}

SpinSystem one_spin(double offset_hz) {
  SpinSystem s;
  s.names = {"I"};
  s.gamma_ratio = {1.0};
  s.offset_hz = {offset_hz};
  s.j_hz = {{0.0}};
  s.t2_s = {0.5};
  return s;
}

}  // namespace

TEST_SUITE("detection") {

TEST_CASE("fid of Ix is cos(pi J t) exp(-t/T2)") {
  const SpinSystem s = preset("chloroform");
  const double dwell = 1e-4;
  const Fid f = observe_fid(s, state("xe"), 0, 256, dwell);
  double worst = 0.0;
  for (int k = 0; k < 256; ++k) {
    const double t = k * dwell;
    const Complex want = std::cos(kPi * 200.0 * t) * std::exp(-t / 0.5);
    worst = std::max(worst, std::abs(f.samples[static_cast<std::size_t>(k)] - want));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("fid of Iy starts on the imaginary axis") {
  const Fid f = observe_fid(preset("chloroform"), state("ye"), 0, 256, 1e-4);
  CHECK(std::abs(f.samples[0] - Complex(0.0, 1.0)) < 1e-14);
}

TEST_CASE("offset line lands at +offset") {
  const SpinSystem s = one_spin(30.0);
  const DeviationState ix{spin_operator(1, 0, Label::X), 0.5};
  Acquisition acq;
  acq.dwell_s = 1e-3;
  const Spectrum sp = spectrum(observe_fid(s, ix, 0, resolved_points(s, acq), acq.dwell_s));
  const PeakTable t = peaks(sp, 0.1);
  REQUIRE(t.peaks.size() == 1);
  CHECK(std::abs(t.peaks[0].freq_hz - 30.0) <= sp.bin_hz);
  CHECK(t.pattern == Pattern::Singlet);
}

TEST_CASE("absorption line width is 1/(pi T2)") {
  const SpinSystem s = one_spin(0.0);
  const DeviationState ix{spin_operator(1, 0, Label::X), 0.5};
  const Spectrum sp = spectrum(observe_fid(s, ix, 0, 8192, 1e-3));
  std::size_t top = 0;
  for (std::size_t k = 0; k < sp.amplitudes.size(); ++k)
    if (sp.amplitudes[k].real() > sp.amplitudes[top].real()) top = k;
  const double half = sp.amplitudes[top].real() / 2.0;
  std::size_t lo = top, hi = top;
  while (sp.amplitudes[lo].real() > half) --lo;
  while (sp.amplitudes[hi].real() > half) ++hi;
  const double fwhm = (hi - lo) * sp.bin_hz;
  CHECK(std::abs(fwhm - 1.0 / (kPi * 0.5)) <= 2.0 * sp.bin_hz);
}

TEST_CASE("doublet patterns") {
  const SpinSystem s = preset("chloroform");
  const PeakTable in = table_for(s, state("xe"), 0);
  CHECK(in.pattern == Pattern::InPhaseDoublet);
  REQUIRE(in.peaks.size() == 2);
  CHECK(std::abs(in.peaks[0].freq_hz + 100.0) < 1e-9);
  CHECK(std::abs(in.peaks[1].freq_hz - 100.0) < 1e-9);
  CHECK(table_for(s, state("xz"), 0).pattern == Pattern::AntiPhaseDoublet);
  CHECK(table_for(s, state("zx"), 1).pattern == Pattern::AntiPhaseDoublet);
  CHECK(table_for(s, state("zx"), 0).pattern == Pattern::Null);
  CHECK(table_for(s, state("xx"), 0).pattern == Pattern::Null);
}

TEST_CASE("sign flips show in the reference phase") {
  const SpinSystem s = preset("chloroform");
  const double a = table_for(s, state("xe"), 0).reference_phase_deg;
  const double b = table_for(s, state("xe", -1.0), 0).reference_phase_deg;
  CHECK(std::abs(std::abs(a - b) - 180.0) < 1e-6);
}

TEST_CASE("singlet from a pseudo-pure read") {
  const SpinSystem s = preset("chloroform");
  DeviationState st{product_operator(labels_from_string("xe")) + product_operator(labels_from_string("xz")), 0.25};
  CHECK(table_for(s, st, 0).pattern == Pattern::Singlet);
}

TEST_CASE("equilibrium read gives the 4:1 channel ratio") {
  const SpinSystem s = preset("chloroform");
  const DeviationState eq = equilibrium_deviation(s);
  const ComplexMatrix u = propagator_of(s, parse_sequence("[pi/2]^{I,S}_y"));
  const DeviationState read{u * eq.rho * u.adjoint(), eq.identity_coeff};
  const double hi = table_for(s, read, 0).peaks.at(0).magnitude;
  const double hs = table_for(s, read, 1).peaks.at(0).magnitude;
  CHECK(hs / hi == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("readout_check verdicts") {
  const SpinSystem s = preset("chloroform");
  const DeviationState st = state("xx");
  const auto v = readout_check(s, st, parse_sequence("[pi/2]^S_y"),
                               {{"I", Pattern::AntiPhaseDoublet}, {"S", Pattern::Null}});
  CHECK(v.pass);
  const auto bad = readout_check(s, st, PulseSequence{}, {{"I", Pattern::Singlet}});
  CHECK_FALSE(bad.pass);
  CHECK(bad.channels.at(0).observed == Pattern::Null);
  CHECK_THROWS_AS(readout_check(s, st, PulseSequence{}, {{"Q", Pattern::Null}}), UserError);
}

TEST_CASE("spin-locked spectrum follows the correlator") {
  // 2IxSy: rotate Sy to z, lock I on x, read the anti-phase I doublet.
  const SpinSystem s = preset("chloroform");
  const ComplexMatrix u = propagator_of(s, parse_sequence("[pi/2]^S_x"));
  std::vector<double> low_line;
  for (double sign : {1.0, -1.0}) {
    const DeviationState st = state("xy", sign);
    CHECK(correlation(st, Axis::X, Axis::Y) == doctest::Approx(2.0 * sign));
    const DeviationState locked =
        apply(spinlock_channel(s, 0, Axis::X), DeviationState{u * st.rho * u.adjoint(), 0.25});
    const PeakTable t = table_for(s, locked, 0);
    REQUIRE(t.pattern == Pattern::AntiPhaseDoublet);
    low_line.push_back(std::cos((t.reference_phase_deg + t.peaks[0].phase_deg) * kPi / 180.0));
  }
  // Absorptive on the x receiver, and inverted with the correlator.
  CHECK(std::abs(low_line[0]) > 0.999);
  CHECK(low_line[0] * low_line[1] < -0.998);
}

TEST_CASE("correlation needs a Hermitian two-spin state") {
  CHECK_THROWS_AS(correlation(DeviationState{ComplexMatrix::Zero(2, 2), 0.5}, Axis::X, Axis::X), ContractError);
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 3) = 1.0;
  CHECK_THROWS_AS(correlation(DeviationState{m, 0.25}, Axis::X, Axis::X), ContractError);
}

TEST_CASE("acquisition validation and defaults") {
  const SpinSystem s = preset("chloroform");
  CHECK_THROWS_AS(observe_fid(s, state("xe"), 0, 300, 1e-3), UserError);
  CHECK_THROWS_AS(observe_fid(s, state("xe"), 0, 128, 1e-3), UserError);
  CHECK_THROWS_AS(observe_fid(s, state("xe"), 0, 256, 0.0), UserError);
  CHECK_THROWS_AS(observe_fid(s, state("xe"), 2, 256, 1e-3), UserError);
  CHECK(resolved_dwell(s, Acquisition{}) == doctest::Approx(1.0 / 800.0));
  CHECK(resolved_points(s, Acquisition{}) == 2048);
  SpinSystem wide = s;
  wide.j_hz[0][1] = wide.j_hz[1][0] = 500.0;
  CHECK(resolved_points(wide, Acquisition{}) == 8192);
  Acquisition fixed;
  fixed.points = 512;
  CHECK(resolved_points(wide, fixed) == 512);
  CHECK_THROWS_AS(peaks(Spectrum{}, 1.5), UserError);
}

TEST_CASE("zero state is null") {
  const SpinSystem s = preset("chloroform");
  CHECK(table_for(s, DeviationState{ComplexMatrix::Zero(4, 4), 0.25}, 0).pattern == Pattern::Null);
}

TEST_CASE("pattern names round trip") {
  for (Pattern p : {Pattern::Null, Pattern::Singlet, Pattern::InPhaseDoublet, Pattern::AntiPhaseDoublet,
                    Pattern::Multiplet})
    CHECK(pattern_from_string(to_string(p)) == p);
  CHECK_THROWS_AS(pattern_from_string("quartet"), UserError);
}

TEST_CASE("first sample is the transverse projection") {
  const SpinSystem s = preset("chloroform");
  std::mt19937_64 rng(19);
  const ComplexMatrix rho = testing::random_hermitian(rng, 4);
  const ComplexMatrix raising = spin_operator(2, 1, Label::X) + Complex(0, 1) * spin_operator(2, 1, Label::Y);
  const Fid f = observe_fid(s, DeviationState{rho, 0.25}, 1, 256, 1e-3);
  CHECK(std::abs(f.samples[0] - (rho * raising).trace()) < 1e-12);
}

TEST_CASE("longitudinal states give no signal") {
  const Fid f = observe_fid(preset("chloroform"), state("zz"), 0, 256, 1e-3);
  for (const auto& x : f.samples) CHECK(x == Complex{});
  const Spectrum sp = spectrum(f);
  for (const auto& x : sp.amplitudes) CHECK(std::abs(x) == 0.0);
}

TEST_CASE("correlator examples") {
  CHECK(correlation(state("xx", 0.5), Axis::X, Axis::X) == doctest::Approx(1.0));
  for (Axis i : {Axis::X, Axis::Y})
    for (Axis j : {Axis::X, Axis::Y}) CHECK(correlation(state("ze"), i, j) == 0.0);
}

}  // TEST_SUITE
