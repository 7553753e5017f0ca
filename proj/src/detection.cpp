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

#include "popsim/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "popsim/errors.hpp"

namespace popsim {

std::string to_string(Pattern p) {
  switch (p) {
    case Pattern::Null: return "null";
    case Pattern::Singlet: return "singlet";
    case Pattern::InPhaseDoublet: return "in-phase doublet";
    case Pattern::AntiPhaseDoublet: return "anti-phase doublet";
    case Pattern::Multiplet: return "multiplet";
  }
  return "?";
}

Pattern pattern_from_string(const std::string& s) {
  for (Pattern p : {Pattern::Null, Pattern::Singlet, Pattern::InPhaseDoublet,
                    Pattern::AntiPhaseDoublet, Pattern::Multiplet})
    if (to_string(p) == s) return p;
  throw UserError("unknown spectral pattern '" + s + "'");
}

double resolved_dwell(const SpinSystem& sys, const Acquisition& acq) {
  if (acq.dwell_s > 0.0) return acq.dwell_s;
  if (sys.size() >= 2 && sys.primary_coupling_hz() != 0.0)
    return 1.0 / (4.0 * std::abs(sys.primary_coupling_hz()));
  return 1e-3;
}

int resolved_points(const SpinSystem& sys, const Acquisition& acq) {
  if (acq.points != 0) return acq.points;
  constexpr int kMinPoints = 2048, kMaxPoints = 1 << 18;
  const double dwell = resolved_dwell(sys, acq);
  const double t2 = *std::max_element(sys.t2_s.begin(), sys.t2_s.end());
  int n = kMinPoints;
  while (n < kMaxPoints && n * dwell < 5.0 * t2) n *= 2;
  return n;
}

Fid observe_fid(const SpinSystem& sys, const DeviationState& state, int channel,
                int points, double dwell_s) {
  if (points < 256 || (points & (points - 1)) != 0)
    throw UserError("fid length must be a power of two >= 256");
  if (!(dwell_s > 0.0)) throw UserError("dwell time must be positive");
  if (channel < 0 || channel >= sys.size()) throw UserError("channel out of range");
  if (state.rho.rows() != sys.dim()) throw ContractError("state dimension mismatch");

  const int n = sys.size();
  const ComplexMatrix h = internal_hamiltonian(sys, true);
  const ComplexMatrix raising = spin_operator(n, channel, Label::X) +
                                Complex(0.0, 1.0) * spin_operator(n, channel, Label::Y);

  // The weak-coupling Hamiltonian is diagonal, so each coherence rho_rc
  // just picks up exp(-i (E_r - E_c) t).
  struct Line {
    Complex amplitude;
    double omega;
  };
  std::vector<Line> lines;
  for (Eigen::Index r = 0; r < raising.rows(); ++r)
    for (Eigen::Index c = 0; c < raising.cols(); ++c) {
      if (raising(c, r) == Complex{} || state.rho(r, c) == Complex{}) continue;
      lines.push_back({state.rho(r, c) * raising(c, r), (h(r, r) - h(c, c)).real()});
    }

  Fid fid;
  fid.channel = channel;
  fid.dwell_s = dwell_s;
  fid.t2_s = sys.t2_s[static_cast<std::size_t>(channel)];
  fid.center_hz = sys.offset_hz[static_cast<std::size_t>(channel)];
  fid.samples.resize(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double t = k * dwell_s;
    Complex s{};
    for (const auto& line : lines) s += line.amplitude * std::polar(1.0, -line.omega * t);
    fid.samples[static_cast<std::size_t>(k)] = s * std::exp(-t / fid.t2_s);
  }
  return fid;
}

Spectrum spectrum(const Fid& fid) {
  const std::size_t n = fid.samples.size() * 2;
  std::vector<Complex> padded(n, Complex{});
  for (std::size_t k = 0; k < fid.samples.size(); ++k)
    padded[k] = fid.samples[k] *
                std::polar(1.0, -2.0 * std::numbers::pi * fid.center_hz * k * fid.dwell_s);

  std::vector<Complex> transformed;
  Eigen::FFT<double> fft;
  fft.fwd(transformed, padded);

  Spectrum sp;
  sp.bin_hz = 1.0 / (static_cast<double>(n) * fid.dwell_s);
  sp.freq_hz.resize(n);
  sp.amplitudes.resize(n);
  const std::size_t half = n / 2;
  for (std::size_t j = 0; j < n; ++j) {
    sp.freq_hz[j] = fid.center_hz + (static_cast<double>(j) - static_cast<double>(half)) * sp.bin_hz;
    sp.amplitudes[j] = transformed[(j + half) % n];
  }
  return sp;
}

namespace {

double wrap_deg(double d) {
  d = std::fmod(d, 360.0);
  if (d > 180.0) d -= 360.0;
  if (d <= -180.0) d += 360.0;
  return d;
}

double phase_deg(Complex c) { return std::arg(c) * 180.0 / std::numbers::pi; }

}  // namespace

PeakTable peaks(const Spectrum& sp, double threshold_rel, double abs_floor) {
  if (!(threshold_rel > 0.0 && threshold_rel < 1.0))
    throw UserError("peak threshold must lie in (0, 1)");
  PeakTable table;
  const std::size_t n = sp.amplitudes.size();
  double max_mag = 0.0;
  for (const auto& a : sp.amplitudes) max_mag = std::max(max_mag, std::abs(a));
  if (max_mag < abs_floor || n < 3) return table;

  std::vector<std::size_t> idx;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double m = std::abs(sp.amplitudes[j]);
    if (m >= threshold_rel * max_mag && m > std::abs(sp.amplitudes[j - 1]) &&
        m >= std::abs(sp.amplitudes[j + 1]))
      idx.push_back(j);
  }
  if (idx.empty()) return table;

  std::size_t strongest = idx.front();
  for (std::size_t j : idx)
    if (std::abs(sp.amplitudes[j]) > std::abs(sp.amplitudes[strongest])) strongest = j;
  table.reference_phase_deg = phase_deg(sp.amplitudes[strongest]);
  for (std::size_t j : idx)
    table.peaks.push_back({sp.freq_hz[j], std::abs(sp.amplitudes[j]),
                           wrap_deg(phase_deg(sp.amplitudes[j]) - table.reference_phase_deg)});

  switch (table.peaks.size()) {
    case 1: table.pattern = Pattern::Singlet; break;
    case 2: {
      const double diff = wrap_deg(table.peaks[1].phase_deg - table.peaks[0].phase_deg);
      table.pattern = std::abs(diff) < 90.0 ? Pattern::InPhaseDoublet
                                            : Pattern::AntiPhaseDoublet;
      break;
    }
    default: table.pattern = Pattern::Multiplet; break;
  }
  return table;
}

double correlation(const DeviationState& state, Axis axis_i, Axis axis_s) {
  if (state.rho.rows() != 4 || state.rho.cols() != 4)
    throw ContractError("correlation needs a two-spin state");
  const double scale = std::max(1.0, max_abs(state.rho));
  if (!is_hermitian(state.rho, 1e-12 * scale))
    throw ContractError("correlation: state is not Hermitian");
  const ComplexMatrix op =
      4.0 * spin_operator(2, 0, to_label(axis_i)) * spin_operator(2, 1, to_label(axis_s));
  const Complex tr = (op * state.rho).trace();
  if (std::abs(tr.imag()) > 1e-12 * scale)
    throw ContractError("correlation: trace has an imaginary part");
  return tr.real();
}

ReadoutVerdict readout_check(const SpinSystem& sys, const DeviationState& state,
                             const PulseSequence& readout,
                             const std::vector<std::pair<std::string, Pattern>>& expected,
                             const Acquisition& acq, const Bindings& bindings) {
  const ComplexMatrix u = propagator_of(sys, readout, bindings);
  const DeviationState after{u * state.rho * u.adjoint(), state.identity_coeff};
  const double dwell = resolved_dwell(sys, acq);
  const int points = resolved_points(sys, acq);

  ReadoutVerdict verdict;
  for (const auto& [spin, want] : expected) {
    ChannelReport report;
    report.spin = spin;
    report.expected = want;
    report.table = peaks(spectrum(observe_fid(sys, after, sys.index_of(spin), points, dwell)),
                         acq.threshold_rel);
    report.observed = report.table.pattern;
    verdict.pass = verdict.pass && report.observed == want;
    verdict.channels.push_back(std::move(report));
  }
  return verdict;
}

}  // namespace popsim
