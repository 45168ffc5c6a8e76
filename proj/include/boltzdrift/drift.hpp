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

#ifndef BOLTZDRIFT_DRIFT_HPP
#define BOLTZDRIFT_DRIFT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boltzdrift/energy.hpp"
#include "boltzdrift/kernels.hpp"
#include "boltzdrift/rng.hpp"

namespace boltzdrift {

/// How the target-side smoothed score is estimated.
enum class Estimator { monte_carlo, second_order };

/// "mc" | "second_order". Throws InvalidInput otherwise.
Estimator parse_estimator(const std::string& name);
std::string to_string(Estimator e);

struct DriftConfig {
  double sigma = 0.22;  // shared by target- and sampler-side smoothing
  double eta = 0.22;
  Estimator estimator = Estimator::monte_carlo;
  int num_perturbations = 256;
  std::optional<double> clip_norm;
  /// Second-order only: replace the estimate by -grad E at points where
  /// I + sigma^2 H is singular instead of throwing.
  bool curvature_fallback = false;

  void validate() const;
};

struct DriftDiagnostics {
  double mean_norm = 0.0;
  double max_norm = 0.0;
  /// Mean importance-sampling ESS over the batch (monte_carlo only).
  std::optional<double> ess_mean;
  /// Batch rows that used the -grad E fallback.
  std::vector<Eigen::Index> curvature_fallbacks;
  Vec norms;
  Vec ess;
};

struct DriftField {
  Mat vectors;       // eta * (target_side - sampler_side), clipped
  Mat target_side;   // g_hat
  Mat sampler_side;  // s_hat
  DriftDiagnostics diagnostics;
};

/// Self-normalized importance-sampling local mean-shift at one point.
/// Draws L x dim standard normals from `rng`. Writes the weight ESS to `ess`
/// when non-null.
Vec target_drift_mc(const EnergyTarget& target, ConstVecRef x, double sigma,
                    int num_perturbations, Rng& rng, double* ess = nullptr);

/// Curvature-corrected gradient -(I + sigma^2 H)^{-1} grad E. Throws
/// SingularCurvature when |det(I + sigma^2 H)| < 1e-10.
Vec target_drift_second_order(const EnergyTarget& target, ConstVecRef x,
                              double sigma);

/// Gaussian mean-shift estimate of grad log(q * phi_sigma) at every row of
/// the batch. The self term j = i is part of both sums.
Mat sampler_score_meanshift(ConstMatRef batch, double sigma,
                            ExecMode mode = ExecMode::parallel);

/// The same estimator evaluated at an arbitrary query point.
Vec sampler_score_at(ConstMatRef batch, ConstVecRef x, double sigma);

/// Combines precomputed target- and sampler-side estimates into a field.
DriftField assemble_drift(Mat target_side, Mat sampler_side,
                          const DriftConfig& cfg);

/// Full drift for a generated batch. Perturbations for row i come from
/// derive_seed(stream_seed, {i}), so the result does not depend on the
/// thread count.
DriftField drift_field(const EnergyTarget& target, ConstMatRef batch,
                       const DriftConfig& cfg, std::uint64_t stream_seed,
                       ExecMode mode = ExecMode::parallel);

}  // namespace boltzdrift

#endif  // BOLTZDRIFT_DRIFT_HPP
