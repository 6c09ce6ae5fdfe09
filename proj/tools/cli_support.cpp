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

#include "cli_support.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace kdcli {

void check(kd_status s, std::string_view context) {
  if (s == KD_OK) return;
  const std::string msg = std::string(context) + ": " + kd_last_error();
  switch (s) {
    case KD_ERR_INVALID_ARGUMENT:
    case KD_ERR_DIMENSION:
    case KD_ERR_DOMAIN:
      throw CommandError(kExitValidation, msg);
    default:
      throw CommandError(kExitFailure, msg);
  }
}

Die parse_die(const std::string& text) {
  kd_die* d = nullptr;
  check(kd_die_parse(text.c_str(), &d), "die");
  return Die(d);
}

Strategy load_strategy(const std::string& path) {
  kd_strategy* s = nullptr;
  check(kd_strategy_load(path.c_str(), &s), "strategy " + path);
  return Strategy(s);
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto slash = item.find('/');
    char* end = nullptr;
    if (slash == std::string::npos) {
      const double v = std::strtod(item.c_str(), &end);
      if (item.empty() || *end != '\0') {
        throw CommandError(kExitValidation, "cannot parse number '" + item + "'");
      }
      out.push_back(v);
    } else {
      const std::string num = item.substr(0, slash), den = item.substr(slash + 1);
      char* e1 = nullptr;
      char* e2 = nullptr;
      const double a = std::strtod(num.c_str(), &e1);
      const double b = std::strtod(den.c_str(), &e2);
      if (num.empty() || den.empty() || *e1 != '\0' || *e2 != '\0' || b == 0.0) {
        throw CommandError(kExitValidation, "cannot parse fraction '" + item + "'");
      }
      out.push_back(a / b);
    }
  }
  if (out.empty()) throw CommandError(kExitValidation, "empty vector");
  return out;
}

std::string fixed(double v, int decimals) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string join(const std::vector<double>& v, int decimals) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fixed(v[i], decimals);
  }
  return s;
}

void CommonOptions::add_to(CLI::App& app, bool with_die) {
  if (with_die) {
    app.add_option("--p", die, "Die probabilities, comma separated; fractions like 1/3 allowed")
        ->capture_default_str();
  }
  app.add_option("--threads", threads, "Worker thread cap (0 = hardware concurrency)")
      ->capture_default_str();
  app.add_option("--out-dir", out_dir,
                 "Output directory (default $KNOCKDOWN_OUT_DIR or ./knockdown-out)");
  app.add_option("--tolerance", tolerance, "Absolute quadrature tolerance")
      ->capture_default_str();
}

std::filesystem::path CommonOptions::output_dir() const {
  if (!out_dir.empty()) return out_dir;
  if (const char* env = std::getenv("KNOCKDOWN_OUT_DIR"); env && *env) return env;
  return "knockdown-out";
}

kd_quadrature CommonOptions::quadrature() const {
  kd_quadrature q = kd_quadrature_default();
  q.abs_tolerance = tolerance;
  return q;
}

Run::Run(std::string command, const CLI::App& app, const CommonOptions& common)
    : command_(std::move(command)),
      dir_(common.output_dir()),
      start_(std::chrono::steady_clock::now()) {
  parameters_ = nlohmann::json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_name(false, true);
    if (name.empty() || name == "--help" || name == "-h" || name == "--help-all") continue;
    const std::string key = opt->get_lnames().empty() ? name : opt->get_lnames().front();
    if (opt->count() > 0) {
      const auto& r = opt->results();
      if (opt->get_type_size_max() == 0) {
        parameters_[key] = true;
      } else if (r.size() == 1) {
        parameters_[key] = r.front();
      } else {
        parameters_[key] = r;
      }
    } else if (!opt->get_default_str().empty()) {
      parameters_[key] = opt->get_default_str();
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw CommandError(kExitFailure, "cannot create output directory " + dir_.string());
}

void Run::line(const std::string& text) {
  report_ += text;
  report_ += '\n';
  std::cout << text << '\n';
}

std::filesystem::path Run::output(const std::string& name) {
  outputs_.push_back(name);
  return dir_ / name;
}

int Run::finish(int exit_code) {
  const auto primary = command_ + ".txt";
  {
    std::ofstream out(output(primary), std::ios::binary);
    out << report_;
    if (!out) throw CommandError(kExitFailure, "cannot write " + (dir_ / primary).string());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  nlohmann::json m;
  m["command"] = command_;
  m["parameters"] = parameters_;
  m["tool_version"] = kd_version();
  m["seed"] = seed_;
  m["wall_clock_seconds"] = seconds;
  m["outputs"] = outputs_;
  m["status"] = status_;
  m["exit_code"] = exit_code;
  if (!extra_.empty()) m["details"] = extra_;
  const auto manifest = dir_ / (command_ + ".manifest.json");
  std::ofstream out(manifest, std::ios::binary);
  out << m.dump(2) << '\n';
  if (!out) throw CommandError(kExitFailure, "cannot write " + manifest.string());
  return exit_code;
}

}  // namespace kdcli
