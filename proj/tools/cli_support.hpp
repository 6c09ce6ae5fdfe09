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

#pragma once

// Shared plumbing for the command-line tool: handle wrappers over the C API,
// output directories, run manifests and small text helpers.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "knockdown/knockdown.h"

namespace kdcli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCheckFailed = 3;
inline constexpr int kExitBudget = 4;

// Thrown on any failing C API call; carries the exit code to use.
class CommandError : public std::runtime_error {
 public:
  CommandError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

void check(kd_status s, std::string_view context);

template <class T, void (*Destroy)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Destroy(p); }
};

using Die = std::unique_ptr<kd_die, HandleDeleter<kd_die, kd_die_destroy>>;
using Strategy = std::unique_ptr<kd_strategy, HandleDeleter<kd_strategy, kd_strategy_destroy>>;
using Grid = std::unique_ptr<kd_grid, HandleDeleter<kd_grid, kd_grid_destroy>>;
using Matrix = std::unique_ptr<kd_matrix, HandleDeleter<kd_matrix, kd_matrix_destroy>>;
using Solution = std::unique_ptr<kd_solution, HandleDeleter<kd_solution, kd_solution_destroy>>;

Die parse_die(const std::string& text);
Strategy load_strategy(const std::string& path);

// Comma-separated reals; entries of the form a/b are fractions.
std::vector<double> parse_vector(const std::string& text);

std::string fixed(double v, int decimals);
std::string sci(double v);
std::string join(const std::vector<double>& v, int decimals);

// Options shared by every subcommand.
struct CommonOptions {
  std::string die = "1/3,1/3,1/3";
  unsigned threads = 0;
  std::string out_dir;
  double tolerance = 1e-10;

  void add_to(CLI::App& app, bool with_die = true);
  std::filesystem::path output_dir() const;
  kd_quadrature quadrature() const;
};

// Collects the report text, echoes it to stdout, and writes the primary
// output plus a manifest when finished.
class Run {
 public:
  Run(std::string command, const CLI::App& app, const CommonOptions& common);

  void line(const std::string& text);
  const std::string& report() const { return report_; }

  // Registers a file written by the command (relative names live in the out dir).
  std::filesystem::path output(const std::string& name);

  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void set_status(std::string status) { status_ = std::move(status); }
  void note(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }

  // Writes <command>.txt and <command>.manifest.json; returns exit_code.
  int finish(int exit_code);

 private:
  std::string command_;
  nlohmann::json parameters_;
  nlohmann::json extra_ = nlohmann::json::object();
  std::filesystem::path dir_;
  std::string report_;
  std::vector<std::string> outputs_;
  std::uint64_t seed_ = 0;
  std::string status_ = "ok";
  std::chrono::steady_clock::time_point start_;
};

}  // namespace kdcli
