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
#include <utility>
#include <vector>

#include "popsim/compiler.hpp"
#include "popsim/spin_system.hpp"

namespace popsim {

/// Time-domain signal on one spin's channel. samples[0] is
/// Tr(rho (I_x + i I_y)) for that spin.
struct Fid {
  int channel = 0;
  double dwell_s = 0.0;
  double t2_s = 0.0;
  /// Channel offset; the spectrum axis is centered here.
  double center_hz = 0.0;
  std::vector<Complex> samples;
};

struct Spectrum {
  std::vector<double> freq_hz;
  std::vector<Complex> amplitudes;
  double bin_hz = 0.0;
};

enum class Pattern { Null, Singlet, InPhaseDoublet, AntiPhaseDoublet, Multiplet };

std::string to_string(Pattern p);
Pattern pattern_from_string(const std::string& s);

struct Peak {
  double freq_hz = 0.0;
  double magnitude = 0.0;
  /// Relative to the strongest peak.
  double phase_deg = 0.0;
};

struct PeakTable {
  std::vector<Peak> peaks;
  Pattern pattern = Pattern::Null;
  /// Absolute phase of the strongest peak (zero-order reference).
  double reference_phase_deg = 0.0;
};

struct Acquisition {
  /// 0 selects the smallest power of two >= 2048 whose acquisition time
  /// covers 5 T2, so truncation ripple stays below 1% of the line height.
  int points = 0;
  /// 0 selects 1/(4J), which puts the J/2 lines at a quarter of the band.
  double dwell_s = 0.0;
  double threshold_rel = 0.1;
};

double resolved_dwell(const SpinSystem& sys, const Acquisition& acq);
int resolved_points(const SpinSystem& sys, const Acquisition& acq);

/// Samples Tr(rho(t) I+_channel) exp(-t/T2) with rho evolving under the
/// internal Hamiltonian including offsets. Throws UserError when points is
/// not a power of two >= 256 or dwell <= 0.
Fid observe_fid(const SpinSystem& sys, const DeviationState& state, int channel,
                int points, double dwell_s);

/// DFT after zero-filling to twice the length; ascending frequency axis.
Spectrum spectrum(const Fid& fid);

/// Local maxima of |amplitude| above threshold_rel * max. Spectra whose
/// largest magnitude is below abs_floor have no peaks.
PeakTable peaks(const Spectrum& sp, double threshold_rel, double abs_floor = 1e-8);

/// Tr(4 I_{axis_i} S_{axis_s} rho) for a two-spin state. Throws
/// ContractError for non-Hermitian input.
double correlation(const DeviationState& state, Axis axis_i, Axis axis_s);

struct ChannelReport {
  std::string spin;
  Pattern expected = Pattern::Null;
  Pattern observed = Pattern::Null;
  PeakTable table;
};

struct ReadoutVerdict {
  bool pass = true;
  std::vector<ChannelReport> channels;
};

/// Applies a unitary readout and classifies the spectrum of each listed
/// channel against the expected pattern.
ReadoutVerdict readout_check(const SpinSystem& sys, const DeviationState& state,
                             const PulseSequence& readout,
                             const std::vector<std::pair<std::string, Pattern>>& expected,
                             const Acquisition& acq = {}, const Bindings& bindings = {});

}  // namespace popsim
