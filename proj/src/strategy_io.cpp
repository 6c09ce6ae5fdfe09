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

#include "strategy_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace knockdown {
namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_decimal(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ValidationError("cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s) {
  s = trim(s);
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const double num = parse_decimal(s.substr(0, slash));
    const double den = parse_decimal(s.substr(slash + 1));
    if (den == 0.0) throw ValidationError("zero denominator in '" + std::string(s) + "'");
    return num / den;
  }
  return parse_decimal(s);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

template <class Pure>
std::string format_body(const Mixed<Pure>& s) {
  std::ostringstream os;
  for (const auto& e : s.entries()) {
    os << format_double(e.weight);
    if constexpr (std::is_same_v<Pure, TokenAllocation>) {
      for (auto c : e.strategy.counts()) os << ' ' << c;
    } else {
      for (auto v : e.strategy.values()) os << ' ' << format_double(v);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace

std::string format_strategy(const DiscreteMixed& s) {
  return "discrete " + std::to_string(s.bins()) + " " + std::to_string(s[0].strategy.total()) +
         "\n" + format_body(s);
}

std::string format_strategy(const ContinuousMixed& s) {
  return "continuous " + std::to_string(s.bins()) + "\n" + format_body(s);
}

std::string format_strategy(const AnyMixed& s) {
  return std::visit([](const auto& m) { return format_strategy(m); }, s);
}

AnyMixed parse_strategy(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      if (!trim(line).empty()) return true;
    }
    return false;
  };
  if (!next_line()) throw ValidationError("strategy text is empty");
  std::istringstream header(line);
  std::string scale;
  std::size_t k = 0;
  header >> scale >> k;
  if (!header || (scale != "discrete" && scale != "continuous") || k < 1) {
    throw ValidationError("bad strategy header '" + line + "'");
  }
  std::int64_t n = 0;
  if (scale == "discrete" && !(header >> n)) {
    throw ValidationError("discrete strategy header needs a token total");
  }
  std::string extra;
  if (header >> extra) throw ValidationError("trailing text in strategy header");

  std::vector<double> weights;
  std::vector<std::vector<double>> points;
  while (next_line()) {
    std::istringstream row(line);
    std::string word;
    std::vector<double> values;
    while (row >> word) values.push_back(parse_decimal(word));
    if (values.size() != k + 1) {
      throw ValidationError("strategy line has " + std::to_string(values.size()) +
                            " fields, expected " + std::to_string(k + 1));
    }
    weights.push_back(values[0]);
    points.emplace_back(values.begin() + 1, values.end());
  }
  if (weights.empty()) throw ValidationError("strategy has no support lines");
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (std::abs(sum - 1.0) > kLoadWeightTolerance) {
    throw ValidationError("strategy weights sum to " + format_double(sum));
  }
  for (double& w : weights) w /= sum;

  if (scale == "discrete") {
    std::vector<DiscreteMixed::Entry> entries;
    for (std::size_t e = 0; e < points.size(); ++e) {
      std::vector<std::int64_t> counts;
      for (double v : points[e]) {
        if (v != std::floor(v)) throw ValidationError("discrete strategy has non-integer count");
        counts.push_back(static_cast<std::int64_t>(v));
      }
      TokenAllocation a(std::move(counts));
      if (a.total() != n) throw ValidationError("allocation does not sum to the header total");
      entries.push_back({std::move(a), weights[e]});
    }
    return DiscreteMixed(std::move(entries));
  }
  std::vector<ContinuousMixed::Entry> entries;
  for (std::size_t e = 0; e < points.size(); ++e) {
    entries.push_back({Deviation(std::move(points[e])), weights[e]});
  }
  return ContinuousMixed(std::move(entries));
}

AnyMixed load_strategy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open strategy file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_strategy(ss.str());
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << contents;
  if (!out) throw IoError("failed writing " + path);
}

void save_strategy(const std::string& path, const AnyMixed& s) {
  write_text_file(path, format_strategy(s));
}

std::string format_csv(const AnyMixed& s) {
  return std::visit(
      [](const auto& m) {
        std::ostringstream os;
        for (std::size_t i = 0; i < m.bins(); ++i) os << 'x' << (i + 1) << ',';
        os << "weight\n";
        for (const auto& e : m.entries()) {
          for (std::size_t i = 0; i < m.bins(); ++i) {
            if constexpr (std::is_same_v<std::decay_t<decltype(e.strategy)>, TokenAllocation>) {
              os << e.strategy[i] << ',';
            } else {
              os << format_double(e.strategy[i]) << ',';
            }
          }
          os << format_double(e.weight) << '\n';
        }
        return os.str();
      },
      s);
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_real(part));
  return out;
}

std::vector<std::int64_t> parse_int_list(std::string_view text) {
  std::vector<std::int64_t> out;
  for (auto part : split(text, ',')) {
    part = trim(part);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw ValidationError("cannot parse integer '" + std::string(part) + "'");
    }
    out.push_back(v);
  }
  return out;
}

DieSpec parse_die(std::string_view text) { return DieSpec(parse_real_list(text)); }

}  // namespace knockdown
