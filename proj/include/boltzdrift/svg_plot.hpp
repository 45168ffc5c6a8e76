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

#ifndef BOLTZDRIFT_SVG_PLOT_HPP
#define BOLTZDRIFT_SVG_PLOT_HPP

#include <string>

#include "boltzdrift/energy.hpp"

namespace boltzdrift {

struct PlotOptions {
  int grid = 200;                // heatmap cells per axis
  double lo = -4.0;
  double hi = 4.0;
  Eigen::Index max_points = 2000;  // per marker class, evenly strided
  int size_px = 560;             // plot area edge length
  double log_density_range = 12.0;  // nats below the maximum shown in color
};

/// Standalone SVG: -E(x) heatmap over [lo, hi]^2, reference points as hollow
/// circles, generated points as filled dots, axes and legend. Output bytes
/// depend only on the inputs.
std::string render_svg(const EnergyTarget& target, ConstMatRef generated,
                       ConstMatRef reference, const PlotOptions& opts = {});

}  // namespace boltzdrift

#endif  // BOLTZDRIFT_SVG_PLOT_HPP
