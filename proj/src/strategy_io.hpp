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

// Strategy text files, CSV export and command-line value lists.
//
// Strategy format: a header line `scale k [n]` (n only for the discrete
// scale) followed by one `weight v_1 ... v_k` line per support point.

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "game_model.hpp"

namespace knockdown {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kLoadWeightTolerance = 1e-9;

using AnyMixed = std::variant<DiscreteMixed, ContinuousMixed>;

std::string format_strategy(const DiscreteMixed& s);
std::string format_strategy(const ContinuousMixed& s);
std::string format_strategy(const AnyMixed& s);

/// Weights must sum to 1 within kLoadWeightTolerance and are renormalised.
AnyMixed parse_strategy(std::string_view text);
AnyMixed load_strategy(const std::string& path);
void save_strategy(const std::string& path, const AnyMixed& s);

/// CSV with columns x1,...,xk,weight.
std::string format_csv(const AnyMixed& s);

/// Comma-separated reals; entries of the form `a/b` are evaluated as a
/// quotient of two decimal literals.
std::vector<double> parse_real_list(std::string_view text);
std::vector<std::int64_t> parse_int_list(std::string_view text);
DieSpec parse_die(std::string_view text);

void write_text_file(const std::string& path, std::string_view contents);

}  // namespace knockdown
