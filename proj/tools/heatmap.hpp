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

#include <array>
#include <string>
#include <vector>

namespace kdcli {

struct HeatCell {
  std::array<double, 3> point;  // zero-sum deviation or token counts
  double weight;
};

// Standalone SVG of a three-bin strategy over its lattice. Each cell is the
// hexagonal Voronoi cell of a lattice point projected onto the plane
// x1 + x2 + x3 = const, with bin 3 pointing up. Darkness is linear in
// weight / max weight; cells with zero weight are outlined only.
std::string ternary_heatmap_svg(const std::vector<HeatCell>& cells, double spacing,
                                const std::string& title);

}  // namespace kdcli
