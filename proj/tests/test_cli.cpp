// Copyright 2026 The Knockdown Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + KNOCKDOWN_CLI + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const char* name) {
  const auto dir = fs::temp_directory_path() / "knockdown_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("payoff examples") {
  const auto dir = scratch("payoff");
  auto r = run("payoff --scale discrete --n 2 --p 1/2,1/2 --a 2,0 --b 1,1 --out-dir " +
               dir.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("K(a, b) = -0.2500000") != std::string::npos);
  CHECK(r.out.find("quadrature error estimate") != std::string::npos);

  r = run("payoff --scale continuous --a 0.2,-0.1,-0.1 --b 0.2,-0.1,-0.1 --out-dir " +
          dir.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("K(a, b) = 0.0000000") != std::string::npos);

  r = run("payoff --scale discrete --n 180 --p 1/3,1/3,1/3 --a 60,60,60 --b 58,58,64 --out-dir " +
          dir.string());
  CHECK(r.code == 0);
  const auto pos = r.out.find("K(a, b) = ");
  REQUIRE(pos != std::string::npos);
  const double k = std::stod(r.out.substr(pos + 10));
  CHECK(k >= -0.5);
  CHECK(k <= 0.5);
}

TEST_CASE("validation failures exit with code 2") {
  const auto dir = scratch("invalid").string();
  CHECK(run("payoff --a 1,2 --out-dir " + dir).code == 2);
  CHECK(run("payoff --p 0.5,0.6 --a 1,1 --b 2,0 --out-dir " + dir).code == 2);
  CHECK(run("payoff --p 1/2,1/2 --n 3 --a 1,1 --b 2,0 --out-dir " + dir).code == 2);
  CHECK(run("payoff --p 1/2,1/2 --a 1,1,0 --b 2,0 --out-dir " + dir).code == 2);
  CHECK(run("diagnostics --p 1 --out-dir " + dir).code == 2);
  CHECK(run("solve --eps -1 --out-dir " + dir).code == 2);
  CHECK(run("no-such-command").code == 2);
}

TEST_CASE("manifest records the run") {
  const auto dir = scratch("manifest");
  const auto r = run("payoff --n 2 --p 1/2,1/2 --a 2,0 --b 1,1 --out-dir " + dir.string());
  REQUIRE(r.code == 0);
  const auto m = nlohmann::json::parse(slurp(dir / "payoff.manifest.json"));
  CHECK(m.at("command") == "payoff");
  CHECK(m.at("parameters").at("a") == "2,0");
  CHECK(m.at("parameters").at("p") == "1/2,1/2");
  CHECK(m.at("exit_code") == 0);
  CHECK(m.at("status") == "ok");
  CHECK(m.contains("seed"));
  CHECK(m.contains("tool_version"));
  CHECK(m.at("wall_clock_seconds").get<double>() >= 0.0);
  for (const auto& f : m.at("outputs")) CHECK(fs::exists(dir / f.get<std::string>()));
  CHECK(slurp(dir / "payoff.txt") == r.out);
}

TEST_CASE("default output directory comes from the environment") {
  const auto dir = scratch("env");
  const auto r = run("payoff --n 2 --p 1/2,1/2 --a 2,0 --b 1,1", "KNOCKDOWN_OUT_DIR=" + dir.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "payoff.manifest.json"));
}

TEST_CASE("remark42 checks") {
  const auto dir = scratch("remark").string();
  auto r = run("remark42 --skip discrete --out-dir " + dir);
  CHECK(r.code == 0);
  CHECK(r.out.find("-0.0101") != std::string::npos);
  CHECK(r.out.find("kappa") == std::string::npos);
  r = run("remark42 --skip discrete --check-tolerance 1e-12 --out-dir " + dir);
  CHECK(r.code == 3);
  CHECK(r.out.find("FAIL") != std::string::npos);
  CHECK(run("remark42 --skip sideways --out-dir " + dir).code == 2);
}

TEST_CASE("solve: binomial median, trivial target and budget") {
  const auto dir = scratch("solve");
  const auto base = "solve --scale discrete --n 20 --p 1/3,2/3 --out-dir " + dir.string();
  auto r = run(base + " --eps 1e-9");
  CHECK(r.code == 0);
  const auto strategy = slurp(dir / "solve_strategy.txt");
  CHECK(strategy.rfind("discrete 2 20\n", 0) == 0);
  CHECK(strategy.find(" 7 13\n") != std::string::npos);
  CHECK(slurp(dir / "solve_strategy.csv").rfind("x1,x2,weight\n", 0) == 0);
  CHECK_FALSE(fs::exists(dir / "solve_heatmap.svg"));

  r = run(base + " --eps 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("iterations: 1\n") != std::string::npos);

  r = run(base + " --eps 0 --max-iterations 5 --no-cache");
  CHECK(r.code == 4);
  const auto m = nlohmann::json::parse(slurp(dir / "solve.manifest.json"));
  CHECK(m.at("status") == "budget_exhausted");
  CHECK(m.at("exit_code") == 4);
}

TEST_CASE("solve writes a ternary heatmap for three bins") {
  const auto dir = scratch("heatmap");
  const auto r = run("solve --spacing 0.1 --bound 0.2 --eps 0.01 --out-dir " + dir.string());
  CHECK(r.code == 0);
  const auto svg = slurp(dir / "solve_heatmap.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polygon") != std::string::npos);
  CHECK(fs::exists(dir / "cache"));
}

TEST_CASE("reruns reproduce primary outputs byte for byte") {
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  const std::string sim = "simulate --scale discrete --p 1/3,1/3,1/3 --a 2,1,0 --b 1,1,1 "
                          "--trials 20000 --seed 5 --out-dir ";
  REQUIRE(run(sim + a.string()).code == 0);
  REQUIRE(run(sim + b.string() + " --threads 3").code == 0);
  CHECK(slurp(a / "simulate.txt") == slurp(b / "simulate.txt"));

  const std::string solve = "solve --spacing 0.1 --bound 0.2 --eps 0.001 --no-cache --out-dir ";
  REQUIRE(run(solve + a.string()).code == 0);
  REQUIRE(run(solve + b.string()).code == 0);
  CHECK(slurp(a / "solve.txt") == slurp(b / "solve.txt"));
  CHECK(slurp(a / "solve_strategy.txt") == slurp(b / "solve_strategy.txt"));
  CHECK(slurp(a / "solve_strategy.csv") == slurp(b / "solve_strategy.csv"));
}

TEST_CASE("simulate agrees with the exact payoff") {
  const auto dir = scratch("simulate");
  const auto r = run("simulate --scale discrete --p 1/2,1/2 --a 2,1 --b 1,2 --trials 100000 "
                     "--out-dir " + dir.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("z") != std::string::npos);
  CHECK(run("simulate --a 1,1 --out-dir " + dir.string()).code == 2);
}

TEST_CASE("diagnostics pass on the uniform die") {
  const auto dir = scratch("diagnostics");
  const auto r = run("diagnostics --flat-n 100,400 --out-dir " + dir.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
