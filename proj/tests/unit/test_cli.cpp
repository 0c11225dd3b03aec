// Copyright 2026 The qbrach Authors
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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qbrach/io.hpp"

using namespace qbrach;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(QBRACH_BIN) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / ("qbrach_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("solve-free on |0> -> |1>") {
  const fs::path dir = scratch();
  const fs::path in = dir / "free.json";
  write_text_file(in, R"({"version": 1, "dimension": 2, "omega": 1, "basis": "gellmann",
    "psi_i": [[1, 0], [0, 0]], "psi_f": [[0, 0], [1, 0]], "forbidden": []})");
  const Result r = run_cli("solve-free -i " + in.string() + " -o " + (dir / "a.json").string() +
                           " --csv " + (dir / "a.csv").string());
  REQUIRE(r.code == 0);
  const json j = json::parse(slurp(dir / "a.json"));
  CHECK(j["T"].get<double>() == doctest::Approx(M_PI / 2).epsilon(1e-14));
  CHECK(j["report"]["passed"].get<bool>());
  CHECK(slurp(dir / "a.csv").rfind("t,lambda0", 0) == 0);

  // identical runs give identical bytes
  REQUIRE(run_cli("solve-free -i " + in.string() + " -o " + (dir / "b.json").string()).code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));

  const Result v = run_cli("verify " + (dir / "a.json").string());
  CHECK(v.code == 0);
  CHECK(v.out.find("verify: PASS") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("solve-2qubit") {
  const Result r = run_cli("solve-2qubit --omega 10 --omega-b 1.5707963");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["T"].get<double>() == doctest::Approx(std::sqrt(2.0) * 1.5707963 / 10).epsilon(1e-12));
  CHECK(j["T"].get<double>() == doctest::Approx(0.2221441).epsilon(1e-7));
}

TEST_CASE("verify flags a tampered trajectory") {
  const fs::path dir = scratch();
  const Result r = run_cli("solve-2qubit --omega 1 --omega-b 0.7 -o " + (dir / "s.json").string());
  REQUIRE(r.code == 0);
  json j = json::parse(slurp(dir / "s.json"));
  j["trajectory"]["F"][40][0] = j["trajectory"]["F"][40][0].get<double>() + 1e-3;
  write_text_file(dir / "t.json", dump(j));
  const Result v = run_cli("verify " + (dir / "t.json").string());
  CHECK(v.code == 1);
  CHECK(v.out.find("chko_residual_hi") != std::string::npos);
  const auto pos = v.out.find("chko_residual_hi");
  CHECK(v.out.substr(pos, v.out.find('\n', pos) - pos).find("FAIL") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  CHECK(run_cli("solve-m1 --omega 1 --omega-b 1.0471975511965976 --phi 1.5707963267948966").code == 2);
  CHECK(run_cli("solve-free -i /nonexistent.json").code == 1);
  CHECK(run_cli("solve-2qubit --omega -1 --omega-b 0.5").code == 1);
  CHECK(run_cli("no-such-command").code == 1);
  CHECK(run_cli("sweep-m1 --grid 1,2").code == 1);
}

TEST_CASE("sweep-m1 is deterministic across thread counts") {
  const Result a = run_cli("sweep-m1 --grid -0.02,0.02,9x0,0.6,7 --threads 1");
  const Result b = run_cli("sweep-m1 --grid -0.02,0.02,9x0,0.6,7 --threads 4");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(j["omega"].get<double>() == 10.0);
  CHECK(j["points"].size() == 63);
}
