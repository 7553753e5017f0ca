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

#include "popsim/export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "popsim/errors.hpp"

namespace popsim {

namespace {

constexpr double kReportFloor = 1e-12;

double clean(double v) { return std::abs(v) < kReportFloor ? 0.0 : v; }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::json state_to_json(const SpinSystem& sys, const DeviationState& state) {
  const auto dec = decompose(state.rho);
  if (dec.spin_count() != sys.size())
    throw ContractError("state dimension does not match the spin system");
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : dec.terms()) {
    nlohmann::json labels = nlohmann::json::array();
    for (Label l : t.labels) labels.push_back(std::string(1, to_char(l)));
    const bool zero = std::abs(t.coeff) < kReportFloor;
    terms.push_back({{"labels", labels},
                     {"coeff_re", zero ? 0.0 : clean(t.coeff.real())},
                     {"coeff_im", zero ? 0.0 : clean(t.coeff.imag())}});
  }
  return {{"basis", "product-operator"}, {"spins", sys.names}, {"terms", terms}};
}

DeviationState state_from_json(const nlohmann::json& j, const SpinSystem& sys) {
  try {
    if (j.at("basis").get<std::string>() != "product-operator")
      throw UserError("state file basis must be \"product-operator\"");
    const auto spins = j.at("spins").get<std::vector<std::string>>();
    if (static_cast<int>(spins.size()) != sys.size())
      throw ContractError("state file has " + std::to_string(spins.size()) +
                          " spins, the spin system has " + std::to_string(sys.size()));
    if (spins != sys.names)
      throw UserError("state file spins do not match the spin system");
    std::vector<ProductOperatorTerm> terms;
    for (const auto& b : basis(sys.size())) terms.push_back({b.labels, Complex{}});
    ProductOperatorDecomposition zero(sys.size(), terms);
    for (const auto& t : j.at("terms")) {
      std::string labels;
      for (const auto& l : t.at("labels")) labels += l.get<std::string>();
      if (static_cast<int>(labels.size()) != sys.size())
        throw UserError("state term " + labels + " has the wrong number of labels");
      const LabelTuple tuple = labels_from_string(labels);
      for (auto& term : terms)
        if (term.labels == tuple)
          term.coeff += Complex(t.at("coeff_re").get<double>(), t.value("coeff_im", 0.0));
    }
    DeviationState state;
    state.rho = ProductOperatorDecomposition(sys.size(), std::move(terms)).reconstruct();
    state.identity_coeff = 1.0 / static_cast<double>(sys.dim());
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw UserError(std::string("invalid state file: ") + e.what());
  }
}

void write_fid_csv(std::ostream& out, const Fid& fid) {
  out << "t_s,re,im\n";
  for (std::size_t k = 0; k < fid.samples.size(); ++k)
    out << format_double(static_cast<double>(k) * fid.dwell_s) << ','
        << format_double(fid.samples[k].real()) << ','
        << format_double(fid.samples[k].imag()) << '\n';
}

void write_spectrum_csv(std::ostream& out, const Spectrum& sp) {
  out << "freq_hz,re,im\n";
  for (std::size_t k = 0; k < sp.amplitudes.size(); ++k)
    out << format_double(sp.freq_hz[k]) << ',' << format_double(sp.amplitudes[k].real())
        << ',' << format_double(sp.amplitudes[k].imag()) << '\n';
}

nlohmann::json peak_table_to_json(const PeakTable& table) {
  nlohmann::json peaks = nlohmann::json::array();
  for (const auto& p : table.peaks)
    peaks.push_back({{"freq_hz", p.freq_hz}, {"magnitude", p.magnitude},
                     {"phase_deg", p.phase_deg}});
  return {{"pattern", to_string(table.pattern)},
          {"reference_phase_deg", table.reference_phase_deg},
          {"peaks", peaks}};
}

nlohmann::json peaks_to_json(const std::vector<std::pair<std::string, PeakTable>>& channels) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [spin, table] : channels) {
    nlohmann::json entry = peak_table_to_json(table);
    entry["spin"] = spin;
    out.push_back(std::move(entry));
  }
  return {{"channels", out}};
}

nlohmann::json verdict_to_json(const ReadoutVerdict& verdict) {
  nlohmann::json channels = nlohmann::json::array();
  for (const auto& c : verdict.channels) {
    nlohmann::json entry = peak_table_to_json(c.table);
    entry["spin"] = c.spin;
    entry["expected"] = to_string(c.expected);
    entry["observed"] = to_string(c.observed);
    channels.push_back(std::move(entry));
  }
  return {{"verdict", verdict.pass ? "pass" : "fail"}, {"channels", channels}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("failed writing " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace popsim
