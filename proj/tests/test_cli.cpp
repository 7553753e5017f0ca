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
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "popsim/cli.hpp"
#include "popsim/export.hpp"

using namespace popsim;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "popsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "popsim_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  write_file(p.string(), text);
  return p.string();
}

std::map<std::string, double> coefficients(const fs::path& state_file) {
  std::map<std::string, double> out;
  const auto doc = nlohmann::json::parse(read_file(state_file.string()));
  for (const auto& t : doc["terms"]) {
    std::string l;
    for (const auto& x : t["labels"]) l += x.get<std::string>();
    out[l] = t["coeff_re"].get<double>();
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parse lists items") {
  const auto dir = scratch("parse");
  const auto file = write(dir, "eq3.seq",
                          "[pi/2]^{I,S}_x ; (1/4J) ; [pi/2]^{I,S}_y ; (1/4J) ; [pi/2]^{I,S}_-x ; grad(z)\n");
  const auto r = cli({"parse", file});
  CHECK(r.code == 0);
  CHECK(r.out.find("6 items") != std::string::npos);
  CHECK(r.out.find("1: [pi/2]^{I,S}_x") != std::string::npos);
}

TEST_CASE("parse reports the unknown spin with its position") {
  const auto dir = scratch("parse_bad");
  const auto r = cli({"parse", write(dir, "bad.seq", "[pi/2]^Q_x\n")});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown spin Q") != std::string::npos);
  CHECK(r.err.find("1:8") != std::string::npos);
}

TEST_CASE("parse of a missing file is an I/O error") {
  CHECK(cli({"parse", "/nonexistent/x.seq"}).code == 3);
}

TEST_CASE("run: Bell state from the pseudo-pure |00>") {
  const auto dir = scratch("bell");
  const auto r = cli({"run", "--system", "chloroform", "--sequence", "bell_prep", "--initial", "pseudo_pure(0)",
                      "--out", dir.string()});
  REQUIRE(r.code == 0);
  auto c = coefficients(dir / "state.json");
  CHECK(c["zz"] == doctest::Approx(1.0));
  CHECK(c["xx"] == doctest::Approx(1.0));
  CHECK(c["yy"] == doctest::Approx(-1.0));
  CHECK(c["ze"] == 0.0);
}

TEST_CASE("run: 4pi spinor rotation returns the 0 rotation") {
  const auto dir = scratch("spinor");
  REQUIRE(cli({"run", "--sequence", "spinor_prep", "--initial", "equalized", "--out", (dir / "prep").string()}).code == 0);
  const std::string prep = (dir / "prep" / "state.json").string();
  REQUIRE(cli({"run", "--sequence", "spinor_rot", "--bind", "phi=0", "--initial", prep, "--out",
               (dir / "zero").string()}).code == 0);
  REQUIRE(cli({"run", "--sequence", "spinor_rot", "--bind", "phi=4pi", "--initial", prep, "--out",
               (dir / "four").string()}).code == 0);
  REQUIRE(cli({"run", "--sequence", "spinor_rot", "--bind", "phi=2pi", "--initial", prep, "--out",
               (dir / "two").string()}).code == 0);
  const auto zero = coefficients(dir / "zero" / "state.json");
  const auto four = coefficients(dir / "four" / "state.json");
  const auto two = coefficients(dir / "two" / "state.json");
  for (const auto& [label, value] : zero) {
    CAPTURE(label);
    CHECK(std::abs(four.at(label) - value) < 1e-10);
    CHECK(std::abs(two.at(label) + value) < 1e-10);
  }
  CHECK(zero.at("zx") == doctest::Approx(2.5));
}

TEST_CASE("run: empty sequence leaves the initial state") {
  const auto dir = scratch("empty");
  const auto seq = write(dir, "empty.seq", "# nothing\n");
  REQUIRE(cli({"run", "--sequence", seq, "--initial", "equilibrium", "--out", dir.string()}).code == 0);
  auto c = coefficients(dir / "state.json");
  CHECK(c["ze"] == 1.0);
  CHECK(c["ez"] == 4.0);
  CHECK(c["zz"] == 0.0);
}

TEST_CASE("run: custom spin-system file") {
  const auto dir = scratch("system");
  const auto sys = write(dir, "sys.json",
                         R"({"names": ["H", "C"], "gamma_ratio": [1, 0.25], "j_hz": [[0, 150], [150, 0]]})");
  const auto seq = write(dir, "x.seq", "[pi/2]^H_y");
  REQUIRE(cli({"run", "--system", sys, "--sequence", seq, "--out", dir.string()}).code == 0);
  auto c = coefficients(dir / "state.json");
  CHECK(c["xe"] == doctest::Approx(1.0));
  CHECK(c["ez"] == doctest::Approx(0.25));
}

TEST_CASE("exit codes for user, I/O and contract errors") {
  const auto dir = scratch("errors");
  CHECK(cli({"run", "--sequence", "spinor_rot", "--out", dir.string()}).code == 2);
  CHECK(cli({"run", "--sequence", "nope", "--out", dir.string()}).code == 3);
  CHECK(cli({"run", "--system", "benzene", "--sequence", "cnot", "--out", dir.string()}).code == 3);
  CHECK(cli({"run", "--sequence", "cnot", "--initial", "pseudo_pure(9)", "--out", dir.string()}).code == 2);
  CHECK(cli({"run", "--sequence", "cnot", "--bind", "phi", "--out", dir.string()}).code == 2);
  CHECK(cli({"run", "--sequence", "cnot", "--slices", "1", "--out", dir.string()}).code == 2);
  CHECK(cli({"run", "--sequence", "cnot"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);

  const auto three = write(dir, "three.json",
                           R"({"basis": "product-operator", "spins": ["I", "S", "T"], "terms": []})");
  CHECK(cli({"run", "--sequence", "cnot", "--initial", three, "--out", dir.string()}).code == 4);
}

TEST_CASE("spectrum writes deterministic artifacts") {
  const auto a = scratch("spectrum_a"), b = scratch("spectrum_b");
  for (const auto& dir : {a, b}) {
    const auto r = cli({"spectrum", "--sequence", "measure_x", "--initial", "pseudo_pure(0)", "--out",
                        dir.string(), "--points", "512"});
    REQUIRE(r.code == 0);
  }
  for (const char* name : {"state.json", "fid_I.csv", "fid_S.csv", "spectrum_I.csv", "spectrum_S.csv", "peaks.json"}) {
    CAPTURE(name);
    CHECK(read_file((a / name).string()) == read_file((b / name).string()));
  }
  CHECK(read_file((a / "fid_I.csv").string()).rfind("t_s,re,im\n", 0) == 0);
  CHECK(read_file((a / "spectrum_S.csv").string()).rfind("freq_hz,re,im\n", 0) == 0);
  const auto peaks = nlohmann::json::parse(read_file((a / "peaks.json").string()));
  CHECK(peaks["channels"].size() == 2);
}

TEST_CASE("spectrum expectations produce a verdict") {
  const auto dir = scratch("verdict");
  const auto seq = write(dir, "read.seq", "[pi/2]^{I,S}_y");
  auto r = cli({"spectrum", "--sequence", seq, "--initial", "equalized", "--out", dir.string(), "--expect",
                "I=in-phase doublet", "--expect", "S=in-phase doublet"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(read_file((dir / "verdict.json").string()))["verdict"] == "pass");
  r = cli({"spectrum", "--sequence", seq, "--out", dir.string(), "--expect", "I=singlet"});
  CHECK(r.code == 1);
  r = cli({"spectrum", "--sequence", seq, "--out", dir.string(), "--expect", "I=quartet"});
  CHECK(r.code == 2);
}

TEST_CASE("verify-all passes and reports the QFT permutation") {
  const auto dir = scratch("verify");
  const auto report = (dir / "report.txt").string();
  const auto r = cli({"verify-all", "--report", report});
  CHECK(r.code == 0);
  const std::string text = read_file(report);
  CHECK(text == r.out);
  CHECK(text.find("qft2 propagator matches QFT2*SWAP") != std::string::npos);
  CHECK(text.find("11/11 criteria passed") != std::string::npos);
}

TEST_CASE("verify-all fails with two gradient slices") {
  const auto r = cli({"verify-all", "--slices", "2"});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL  2 pseudo-pure state") != std::string::npos);
}

}  // TEST_SUITE
