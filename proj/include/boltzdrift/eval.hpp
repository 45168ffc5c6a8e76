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

#ifndef BOLTZDRIFT_EVAL_HPP
#define BOLTZDRIFT_EVAL_HPP

#include <array>
#include <cstdint>
#include <optional>

#include <nlohmann/json.hpp>

#include "boltzdrift/energy.hpp"
#include "boltzdrift/kernels.hpp"

namespace boltzdrift {

/// Counts in the order (+,+), (-,+), (-,-), (+,-); a zero coordinate counts
/// as positive.
using QuadrantCounts = std::array<std::int64_t, 4>;

struct MetricsReport {
  double mean_l2 = 0.0;
  double cov_frobenius = 0.0;
  double mmd_rbf = 0.0;  // squared MMD, biased V-statistic
  double mmd_bandwidth = 0.0;
  double gen_mean_energy = 0.0;
  double ref_mean_energy = 0.0;
  std::optional<QuadrantCounts> quadrant_counts;  // gmm4 only
  std::int64_t n_gen = 0;
  std::int64_t n_ref = 0;

  bool operator==(const MetricsReport&) const = default;
};

/// |mean(gen) - mean(ref)|_2.
double mean_error(ConstMatRef gen, ConstMatRef ref);

/// |Cov(gen) - Cov(ref)|_F with the (n - 1) estimator.
double cov_error(ConstMatRef gen, ConstMatRef ref);

/// Unbiased sample covariance, rows are observations.
Mat sample_covariance(ConstMatRef points);

/// Median pairwise Euclidean distance among at most `max_points` rows of
/// `ref`, chosen by a fixed-seed shuffle when there are more.
double median_heuristic_bandwidth(ConstMatRef ref, Eigen::Index max_points = 2000);

struct MmdResult {
  double mmd2;
  double bandwidth;
};

/// Biased (V-statistic) MMD^2 with kernel exp(-|a - b|^2 / (2 h^2)). Uses the
/// given bandwidth or the reference median heuristic.
MmdResult mmd_rbf(ConstMatRef gen, ConstMatRef ref,
                  std::optional<double> bandwidth = std::nullopt,
                  ExecMode mode = ExecMode::parallel);

double mean_energy(const EnergyTarget& target, ConstMatRef points);

QuadrantCounts quadrant_counts(ConstMatRef points);

MetricsReport evaluate(const EnergyTarget& target, ConstMatRef gen,
                       ConstMatRef ref, ExecMode mode = ExecMode::parallel);

/// Fixed keys: mean_l2, cov_fro, mmd_rbf, mmd_bandwidth, gen_energy,
/// ref_energy, quadrants (array or null), n_gen, n_ref.
nlohmann::ordered_json to_json(const MetricsReport& report);
MetricsReport metrics_from_json(const nlohmann::json& j);

}  // namespace boltzdrift

#endif  // BOLTZDRIFT_EVAL_HPP
