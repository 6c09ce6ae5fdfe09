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

#include "heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace kdcli {
namespace {

struct Xy {
  double x, y;
};

// Orthonormal coordinates in the zero-sum plane with screen y growing
// downward: bin 1 heavy to the lower left, bin 2 lower right, bin 3 on top.
Xy project(const std::array<double, 3>& p) {
  return {(p[1] - p[0]) / std::sqrt(2.0), (p[0] + p[1] - 2.0 * p[2]) / std::sqrt(6.0)};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string ternary_heatmap_svg(const std::vector<HeatCell>& cells, double spacing,
                                const std::string& title) {
  // Lattice neighbours sit spacing * sqrt(2) apart; the hexagonal cell of a
  // triangular lattice with pitch a has circumradius a / sqrt(3).
  const double radius = spacing * std::sqrt(2.0) / std::sqrt(3.0);
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x, top = 0.0;
  for (const auto& c : cells) {
    const Xy q = project(c.point);
    min_x = std::min(min_x, q.x);
    max_x = std::max(max_x, q.x);
    min_y = std::min(min_y, q.y);
    max_y = std::max(max_y, q.y);
    top = std::max(top, c.weight);
  }
  if (cells.empty()) min_x = max_x = min_y = max_y = 0.0;

  const double pixels = 560.0;
  const double extent = std::max({max_x - min_x, max_y - min_y, spacing}) + 2.0 * radius;
  const double scale = pixels / extent;
  const double margin = 20.0, header = 30.0;
  const double width = pixels + 2.0 * margin, height = pixels + 2.0 * margin + header;
  const double cx = margin + pixels / 2.0 - scale * (min_x + max_x) / 2.0;
  const double cy = margin + header + pixels / 2.0 - scale * (min_y + max_y) / 2.0;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(margin) + "\" y=\"" + num(margin + 10.0) +
         "\" font-family=\"sans-serif\" font-size=\"13\">" + escape(title) + "</text>\n";
  for (const auto& c : cells) {
    const Xy q = project(c.point);
    std::string pts;
    for (int v = 0; v < 6; ++v) {
      const double a = (30.0 + 60.0 * v) * M_PI / 180.0;
      const double x = cx + scale * (q.x + radius * std::cos(a));
      const double y = cy + scale * (q.y + radius * std::sin(a));
      if (v) pts += ' ';
      pts += num(x) + "," + num(y);
    }
    const double darkness = top > 0.0 ? c.weight / top : 0.0;
    const int gray = static_cast<int>(std::lround(255.0 * (1.0 - darkness)));
    char fill[16];
    std::snprintf(fill, sizeof fill, "#%02x%02x%02x", gray, gray, gray);
    svg += "<polygon points=\"" + pts + "\" fill=\"" + fill +
           "\" stroke=\"#d0d0d0\" stroke-width=\"0.5\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace kdcli
