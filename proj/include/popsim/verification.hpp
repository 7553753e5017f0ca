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

#include "popsim/evolution.hpp"

namespace popsim {

/// One assertion inside a criterion.
struct Measurement {
  std::string what;
  bool passed = false;
  /// Measured residual and tolerance, or a free-text observation.
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Measurement> measurements;
  std::vector<std::string> notes;
  bool passed() const;
};

struct VerifyOptions {
  int slices = kDefaultSlices;
};

/// Runs every acceptance criterion in order. Exceptions raised inside a
/// criterion are caught and reported as a failed measurement.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& options = {});

/// "PASS  1 equalization (5/5)" style summary line.
std::string summary_line(const CriterionResult& r);

/// Summary plus one indented line per measurement and note.
std::string full_report(const std::vector<CriterionResult>& results);

}  // namespace popsim
