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

// Hot loops of the drift estimators and the MMD metric.
//
// Every kernel exists twice: `serial::` is the plain scalar reference used by
// the bit-exact sequential mode and by the tests; `parallel::` is the
// OpenMP + vectorized version used for training. Both consume identical random
// draws (one derived stream per point), so they agree up to floating-point
// rounding of exp/log and summation order.

#ifndef BOLTZDRIFT_KERNELS_HPP
#define BOLTZDRIFT_KERNELS_HPP

#include <cstdint>
#include <string>

#include "boltzdrift/energy.hpp"

namespace boltzdrift {

enum class ExecMode { parallel, sequential };

namespace kernels {

/// Per-point output of the importance-sampled local mean-shift.
struct McOutput {
  Mat score;  // n x dim, estimates of -grad of the smoothed energy
  Vec ess;    // n, 1 / sum(wbar^2)
  /// First row whose energies were not finite, or -1.
  Eigen::Index bad_row = -1;
};

/// Row i draws L x dim standard normals from Rng(derive_seed(stream_seed, {i}))
/// in row-major order; u_l = x_i + sigma * eps_l.
McOutput target_drift_mc_batch(const EnergyTarget& target, ConstMatRef points,
                               double sigma, int num_perturbations,
                               std::uint64_t stream_seed, ExecMode mode);

/// Gaussian mean-shift score of the batch at each of its own rows, self term
/// included.
Mat sampler_score(ConstMatRef batch, double sigma, ExecMode mode);

/// Mean of exp(-|a_i - b_j|^2 / (2 h^2)) over all pairs (i, j).
double rbf_kernel_mean(ConstMatRef a, ConstMatRef b, double bandwidth,
                       ExecMode mode);

namespace serial {
McOutput target_drift_mc_batch(const EnergyTarget& target, ConstMatRef points,
                               double sigma, int num_perturbations,
                               std::uint64_t stream_seed);
Mat sampler_score(ConstMatRef batch, double sigma);
double rbf_kernel_mean(ConstMatRef a, ConstMatRef b, double bandwidth);
}  // namespace serial

namespace parallel {
McOutput target_drift_mc_batch(const EnergyTarget& target, ConstMatRef points,
                               double sigma, int num_perturbations,
                               std::uint64_t stream_seed);
Mat sampler_score(ConstMatRef batch, double sigma);
double rbf_kernel_mean(ConstMatRef a, ConstMatRef b, double bandwidth);
}  // namespace parallel

}  // namespace kernels
}  // namespace boltzdrift

#endif  // BOLTZDRIFT_KERNELS_HPP
