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

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "popsim/detection.hpp"
#include "popsim/spin_system.hpp"

namespace popsim {

/// {"basis": "product-operator", "spins": [...], "terms": [{"labels": [...],
/// "coeff_re": r, "coeff_im": i}, ...]} with every 4^n term present and
/// magnitudes below 1e-12 written as 0.
nlohmann::json state_to_json(const SpinSystem& sys, const DeviationState& state);

/// Inverse of state_to_json; missing terms are zero. The identity
/// coefficient is set to 1/2^n.
DeviationState state_from_json(const nlohmann::json& j, const SpinSystem& sys);

void write_fid_csv(std::ostream& out, const Fid& fid);
void write_spectrum_csv(std::ostream& out, const Spectrum& sp);

nlohmann::json peak_table_to_json(const PeakTable& table);
nlohmann::json peaks_to_json(const std::vector<std::pair<std::string, PeakTable>>& channels);
nlohmann::json verdict_to_json(const ReadoutVerdict& verdict);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

/// Throws IoError on failure.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace popsim
