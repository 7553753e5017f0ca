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

#include "popsim/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "popsim/compiler.hpp"
#include "popsim/detection.hpp"
#include "popsim/errors.hpp"
#include "popsim/export.hpp"
#include "popsim/verification.hpp"

namespace popsim {

namespace {

struct RunArgs {
  std::string system = "chloroform";
  std::string sequence;
  std::vector<std::string> binds;
  std::string initial = "equilibrium";
  std::string out_dir;
  std::string slices;
};

struct SpectrumArgs {
  int points = 0;
  double dwell_s = 0.0;
  double threshold = 0.1;
  std::vector<std::string> expect;
};

SpinSystem load_system(const std::string& source) {
  if (is_preset(source)) return preset(source);
  if (!std::filesystem::exists(source))
    throw IoError("no preset or file named " + source);
  return load_spin_system(source);
}

PulseSequence load_sequence(const std::string& source) {
  if (is_canned(source)) return canned(source);
  return parse_sequence(read_file(source));
}

std::pair<std::string, std::string> split_pair(const std::string& text, const char* what) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw UserError(std::string("expected ") + what + " as name=value, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

/// Binding values may be expressions such as "2pi" or "1/(4*J)".
Bindings parse_bindings(const std::vector<std::string>& binds, const SpinSystem& sys) {
  Bindings out;
  const double j = sys.size() >= 2 ? sys.primary_coupling_hz() : std::nan("");
  for (const auto& b : binds) {
    auto [name, value] = split_pair(b, "binding");
    out[name] = evaluate(parse_expression(value), j, {});
  }
  return out;
}

CompileOptions resolve_options(const std::string& slices) {
  CompileOptions opts = compile_options_from_env();
  if (!slices.empty()) opts.slices = parse_slices(slices);
  return opts;
}

DeviationState initial_state(const std::string& sel, const SpinSystem& sys,
                             const CompileOptions& opts) {
  if (sel == "equilibrium") return equilibrium_deviation(sys);
  if (sel == "equalized")
    return apply(compile(canned("equalize"), sys, {}, opts), equilibrium_deviation(sys));
  const std::string prefix = "pseudo_pure(";
  if (sel.rfind(prefix, 0) == 0 && sel.back() == ')') {
    const std::string digits = sel.substr(prefix.size(), sel.size() - prefix.size() - 1);
    int k = -1;
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size() || k < 0 ||
        k >= sys.dim())
      throw UserError("pseudo_pure index must be an integer in [0, " +
                      std::to_string(sys.dim() - 1) + "], got '" + digits + "'");
    return {pseudo_pure_target(k, sys.size()), 1.0 / static_cast<double>(sys.dim())};
  }
  if (!std::filesystem::exists(sel))
    throw IoError("initial state '" + sel +
                  "' is neither equilibrium, equalized, pseudo_pure(k) nor a readable file");
  try {
    return state_from_json(nlohmann::json::parse(read_file(sel)), sys);
  } catch (const nlohmann::json::parse_error& e) {
    throw UserError("invalid state file " + sel + ": " + e.what());
  }
}

std::filesystem::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  return dir;
}

struct Simulation {
  SpinSystem sys;
  DeviationState state;
  std::filesystem::path dir;
};

Simulation simulate(const RunArgs& a) {
  Simulation s;
  s.sys = load_system(a.system);
  const PulseSequence seq = load_sequence(a.sequence);
  const CompileOptions opts = resolve_options(a.slices);
  const Bindings bindings = parse_bindings(a.binds, s.sys);
  const auto channels = compile(seq, s.sys, bindings, opts);
  const DeviationState initial = initial_state(a.initial, s.sys, opts);
  s.state = apply(channels, initial);
  s.dir = prepare_dir(a.out_dir);
  write_file((s.dir / "state.json").string(), state_to_json(s.sys, s.state).dump(2) + "\n");
  return s;
}

int cmd_parse(const std::string& path, const std::string& system, std::ostream& out) {
  const PulseSequence seq = parse_sequence(read_file(path));
  check_spins(seq, load_system(system));
  for (std::size_t k = 0; k < seq.items.size(); ++k)
    out << k + 1 << ": " << to_string(seq.items[k]) << '\n';
  out << seq.items.size() << (seq.items.size() == 1 ? " item" : " items") << '\n';
  const auto params = seq.parameters();
  if (!params.empty()) {
    out << "parameters:";
    for (const auto& p : params) out << ' ' << p;
    out << '\n';
  }
  return kExitOk;
}

int cmd_run(const RunArgs& a, std::ostream& out) {
  const Simulation s = simulate(a);
  out << "wrote " << (s.dir / "state.json").string() << '\n';
  return kExitOk;
}

int cmd_spectrum(const RunArgs& a, const SpectrumArgs& sa, std::ostream& out) {
  const Simulation s = simulate(a);
  Acquisition acq;
  acq.points = sa.points;
  acq.dwell_s = sa.dwell_s;
  acq.threshold_rel = sa.threshold;
  const double dwell = resolved_dwell(s.sys, acq);
  const int points = resolved_points(s.sys, acq);

  std::vector<std::pair<std::string, PeakTable>> tables;
  for (int ch = 0; ch < s.sys.size(); ++ch) {
    const std::string& name = s.sys.names[static_cast<std::size_t>(ch)];
    const Fid fid = observe_fid(s.sys, s.state, ch, points, dwell);
    const Spectrum sp = spectrum(fid);
    std::ostringstream fid_csv, sp_csv;
    write_fid_csv(fid_csv, fid);
    write_spectrum_csv(sp_csv, sp);
    write_file((s.dir / ("fid_" + name + ".csv")).string(), fid_csv.str());
    write_file((s.dir / ("spectrum_" + name + ".csv")).string(), sp_csv.str());
    tables.emplace_back(name, peaks(sp, acq.threshold_rel));
  }
  write_file((s.dir / "peaks.json").string(), peaks_to_json(tables).dump(2) + "\n");
  for (const auto& [name, t] : tables) out << name << ": " << to_string(t.pattern) << '\n';

  if (sa.expect.empty()) return kExitOk;
  std::vector<std::pair<std::string, Pattern>> expected;
  for (const auto& e : sa.expect) {
    auto [spin, pattern] = split_pair(e, "expectation");
    s.sys.index_of(spin);
    expected.emplace_back(spin, pattern_from_string(pattern));
  }
  const ReadoutVerdict v = readout_check(s.sys, s.state, PulseSequence{}, expected, acq);
  write_file((s.dir / "verdict.json").string(), verdict_to_json(v).dump(2) + "\n");
  out << "verdict: " << (v.pass ? "pass" : "fail") << '\n';
  return v.pass ? kExitOk : kExitVerifyFailed;
}

int cmd_verify_all(const std::string& report, const std::string& slices, std::ostream& out) {
  VerifyOptions opts;
  opts.slices = resolve_options(slices).slices;
  const auto results = run_acceptance(opts);
  const std::string text = full_report(results);
  out << text;
  if (!report.empty()) write_file(report, text);
  const bool ok = std::all_of(results.begin(), results.end(),
                              [](const CriterionResult& r) { return r.passed(); });
  return ok ? kExitOk : kExitVerifyFailed;
}

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--system", a.system, "preset name or spin-system JSON file")
      ->capture_default_str();
  cmd->add_option("--sequence", a.sequence, "canned sequence name or sequence file")->required();
  cmd->add_option("--bind", a.binds, "parameter binding name=value (repeatable)");
  cmd->add_option("--initial", a.initial,
                  "equilibrium | equalized | pseudo_pure(k) | state JSON file")
      ->capture_default_str();
  cmd->add_option("--out", a.out_dir, "output directory")->required();
  cmd->add_option("--slices", a.slices, "gradient slices: integer >= 2 or 'exact'");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Product-operator NMR quantum-information simulator"};
  app.name("popsim");
  app.require_subcommand(1);

  std::string parse_path, parse_system = "chloroform";
  auto* parse = app.add_subcommand("parse", "parse a sequence file and print its canonical form");
  parse->add_option("file", parse_path, "sequence file")->required();
  parse->add_option("--system", parse_system, "spin system used to check spin names")
      ->capture_default_str();

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "simulate a sequence and write state.json");
  add_run_options(run, run_args);

  RunArgs spectrum_args;
  SpectrumArgs sp_args;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "simulate, then write fid/spectrum CSVs and peaks.json");
  add_run_options(spectrum_cmd, spectrum_args);
  spectrum_cmd->add_option("--points", sp_args.points, "fid points, power of two >= 256 (0 = at least 2048, covering 5 T2)")
      ->capture_default_str();
  spectrum_cmd->add_option("--dwell", sp_args.dwell_s, "dwell time in seconds (0 = 1/(4J))")
      ->capture_default_str();
  spectrum_cmd->add_option("--threshold", sp_args.threshold, "peak threshold relative to the maximum")
      ->capture_default_str();
  spectrum_cmd->add_option("--expect", sp_args.expect,
                   "expected pattern spin=pattern (repeatable); writes verdict.json");

  std::string report, verify_slices;
  auto* verify = app.add_subcommand("verify-all", "run every acceptance check");
  verify->add_option("--report", report, "also write the report to this file");
  verify->add_option("--slices", verify_slices, "gradient slices: integer >= 2 or 'exact'");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUserError;
    }
    if (*parse) return cmd_parse(parse_path, parse_system, out);
    if (*run) return cmd_run(run_args, out);
    if (*spectrum_cmd) return cmd_spectrum(spectrum_args, sp_args, out);
    return cmd_verify_all(report, verify_slices, out);
  } catch (const UserError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const ContractError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitContract;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitContract;
  }
}

}  // namespace popsim
