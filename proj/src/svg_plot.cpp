// Copyright 2026 The boltzdrift Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "boltzdrift/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "boltzdrift/errors.hpp"

namespace boltzdrift {

namespace {

constexpr int kMargin = 56;
constexpr int kLegendWidth = 150;
constexpr int kLevels = 64;

// Viridis anchors.
constexpr std::array<std::array<double, 3>, 5> kAnchors{{
    {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};

std::string color_for_level(int level) {
  const double t = static_cast<double>(level) / (kLevels - 1);
  const double pos = t * (kAnchors.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), kAnchors.size() - 2);
  const double f = pos - static_cast<double>(i);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c)
    rgb[c] = static_cast<int>(std::lround(kAnchors[i][c] * (1 - f) + kAnchors[i + 1][c] * f));
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const EnergyTarget& target, ConstMatRef generated,
                       ConstMatRef reference, const PlotOptions& opts) {
  if (target.dim() != 2) throw InvalidInput("plot: only 2D targets");
  if (opts.grid < 2) throw InvalidInput("plot: grid must be >= 2");
  if (!(opts.hi > opts.lo)) throw InvalidInput("plot: empty range");
  if ((generated.rows() > 0 && generated.cols() != 2) ||
      (reference.rows() > 0 && reference.cols() != 2))
    throw InvalidInput("plot: points must have 2 columns");

  const int n = opts.grid;
  const double span = opts.hi - opts.lo;
  const double px = static_cast<double>(opts.size_px);
  const double cell = px / n;
  auto sx = [&](double x) { return kMargin + (x - opts.lo) / span * px; };
  auto sy = [&](double y) { return kMargin + (opts.hi - y) / span * px; };

  // -E at cell centers, row 0 = top.
  Mat centers(static_cast<Eigen::Index>(n) * n, 2);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const Eigen::Index k = static_cast<Eigen::Index>(r) * n + c;
      centers(k, 0) = opts.lo + (c + 0.5) * span / n;
      centers(k, 1) = opts.hi - (r + 0.5) * span / n;
    }
  }
  const Vec logp = -target.energies(centers);
  const double top = logp.maxCoeff();

  std::string out;
  out.reserve(1 << 20);
  const int width = 2 * kMargin + opts.size_px + kLegendWidth;
  const int height = 2 * kMargin + opts.size_px;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n";
  out += "<style>.ref{fill:none;stroke:#ffffff;stroke-width:0.8;opacity:0.7}"
         ".gen{fill:#e4572e;opacity:0.75}"
         "text{font-family:sans-serif;font-size:12px;fill:#222}</style>\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  // Heatmap, horizontal runs of equal color merged into one rect.
  out += "<g id=\"heatmap\" shape-rendering=\"crispEdges\">\n";
  for (int r = 0; r < n; ++r) {
    int c = 0;
    while (c < n) {
      auto level_at = [&](int col) {
        const double v = logp[static_cast<Eigen::Index>(r) * n + col] - top;
        const double t = std::clamp(1.0 + v / opts.log_density_range, 0.0, 1.0);
        return static_cast<int>(std::lround(t * (kLevels - 1)));
      };
      const int level = level_at(c);
      int end = c + 1;
      while (end < n && level_at(end) == level) ++end;
      out += "<rect x=\"" + fmt(kMargin + c * cell) + "\" y=\"" + fmt(kMargin + r * cell) +
             "\" width=\"" + fmt((end - c) * cell + 0.05) + "\" height=\"" +
             fmt(cell + 0.05) + "\" fill=\"" + color_for_level(level) + "\"/>\n";
      c = end;
    }
  }
  out += "</g>\n";

  auto emit_points = [&](ConstMatRef pts, const char* cls, const char* radius) {
    out += std::string("<g class=\"") + cls + "\">\n";
    const Eigen::Index total = pts.rows();
    const Eigen::Index shown = std::min(total, opts.max_points);
    for (Eigen::Index s = 0; s < shown; ++s) {
      const Eigen::Index i = s * total / shown;
      const double x = pts(i, 0);
      const double y = pts(i, 1);
      if (x < opts.lo || x > opts.hi || y < opts.lo || y > opts.hi) continue;
      out += "<circle cx=\"" + fmt(sx(x)) + "\" cy=\"" + fmt(sy(y)) + "\" r=\"" + radius +
             "\"/>\n";
    }
    out += "</g>\n";
  };
  emit_points(reference, "ref", "1.8");
  emit_points(generated, "gen", "1.6");

  // Axes with integer ticks.
  out += "<g id=\"axes\" stroke=\"#222\" stroke-width=\"1\">\n";
  out += "<rect x=\"" + fmt(kMargin) + "\" y=\"" + fmt(kMargin) + "\" width=\"" + fmt(px) +
         "\" height=\"" + fmt(px) + "\" fill=\"none\"/>\n";
  for (int t = static_cast<int>(std::ceil(opts.lo)); t <= static_cast<int>(std::floor(opts.hi));
       ++t) {
    out += "<line x1=\"" + fmt(sx(t)) + "\" y1=\"" + fmt(kMargin + px) + "\" x2=\"" +
           fmt(sx(t)) + "\" y2=\"" + fmt(kMargin + px + 5) + "\"/>\n";
    out += "<line x1=\"" + fmt(kMargin - 5) + "\" y1=\"" + fmt(sy(t)) + "\" x2=\"" +
           fmt(kMargin) + "\" y2=\"" + fmt(sy(t)) + "\"/>\n";
  }
  out += "</g>\n<g id=\"tick-labels\">\n";
  for (int t = static_cast<int>(std::ceil(opts.lo)); t <= static_cast<int>(std::floor(opts.hi));
       ++t) {
    out += "<text x=\"" + fmt(sx(t)) + "\" y=\"" + fmt(kMargin + px + 19) +
           "\" text-anchor=\"middle\">" + std::to_string(t) + "</text>\n";
    out += "<text x=\"" + fmt(kMargin - 9) + "\" y=\"" + fmt(sy(t) + 4) +
           "\" text-anchor=\"end\">" + std::to_string(t) + "</text>\n";
  }
  out += "<text x=\"" + fmt(kMargin + px / 2) + "\" y=\"" + fmt(kMargin + px + 40) +
         "\" text-anchor=\"middle\">x1</text>\n";
  out += "<text x=\"" + fmt(kMargin - 38) + "\" y=\"" + fmt(kMargin + px / 2) +
         "\" text-anchor=\"middle\">x2</text>\n";
  out += "<text x=\"" + fmt(kMargin + px / 2) + "\" y=\"" + fmt(kMargin - 18) +
         "\" text-anchor=\"middle\">" + target.name() + ": log density and samples</text>\n";
  out += "</g>\n";

  // Legend.
  const double lx = kMargin + px + 18;
  out += "<g id=\"legend\">\n";
  out += "<rect x=\"" + fmt(lx) + "\" y=\"" + fmt(kMargin) +
         "\" width=\"118\" height=\"52\" fill=\"#555\"/>\n";
  out += "<circle class=\"ref\" cx=\"" + fmt(lx + 12) + "\" cy=\"" + fmt(kMargin + 16) +
         "\" r=\"3\"/>\n";
  out += "<text x=\"" + fmt(lx + 22) + "\" y=\"" + fmt(kMargin + 20) +
         "\" style=\"fill:#fff\">reference</text>\n";
  out += "<circle class=\"gen\" cx=\"" + fmt(lx + 12) + "\" cy=\"" + fmt(kMargin + 36) +
         "\" r=\"3\"/>\n";
  out += "<text x=\"" + fmt(lx + 22) + "\" y=\"" + fmt(kMargin + 40) +
         "\" style=\"fill:#fff\">generated</text>\n";
  // Color bar: top = max log density, bottom = max - range.
  const double bar_top = kMargin + 80;
  const double bar_h = 200;
  for (int l = 0; l < kLevels; ++l) {
    const double y = bar_top + bar_h * (kLevels - 1 - l) / kLevels;
    out += "<rect x=\"" + fmt(lx) + "\" y=\"" + fmt(y) + "\" width=\"16\" height=\"" +
           fmt(bar_h / kLevels + 0.05) + "\" fill=\"" + color_for_level(l) + "\"/>\n";
  }
  out += "<text x=\"" + fmt(lx + 22) + "\" y=\"" + fmt(bar_top + 10) + "\">-E max</text>\n";
  out += "<text x=\"" + fmt(lx + 22) + "\" y=\"" + fmt(bar_top + bar_h) + "\">max - " +
         fmt(opts.log_density_range) + "</text>\n";
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace boltzdrift
