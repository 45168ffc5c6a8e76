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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "boltzdrift/kernels.hpp"
#include "boltzdrift/rng.hpp"

namespace boltzdrift::kernels::serial {

McOutput target_drift_mc_batch(const EnergyTarget& target, ConstMatRef points,
                               double sigma, int num_perturbations,
                               std::uint64_t stream_seed) {
  const Eigen::Index n = points.rows();
  const Eigen::Index dim = points.cols();
  const int L = num_perturbations;
  McOutput out{Mat::Zero(n, dim), Vec::Zero(n)};

  std::vector<double> log_w(static_cast<std::size_t>(L));
  Mat u(L, dim);
  Vec ui(dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    Rng rng(derive_seed(stream_seed, {static_cast<std::uint64_t>(i)}));
    fill_normal(rng, u);
    double mx = -std::numeric_limits<double>::infinity();
    bool finite = true;
    for (int l = 0; l < L; ++l) {
      for (Eigen::Index d = 0; d < dim; ++d) {
        u(l, d) = points(i, d) + sigma * u(l, d);
        ui[d] = u(l, d);
      }
      const double lw = -target.energy(ui);
      if (!std::isfinite(lw)) finite = false;
      log_w[static_cast<std::size_t>(l)] = lw;
      if (lw > mx) mx = lw;
    }
    if (!finite) {
      if (out.bad_row < 0) out.bad_row = i;
      continue;
    }
    double total = 0.0;
    for (double& lw : log_w) total += (lw = std::exp(lw - mx));
    double sum_sq = 0.0;
    for (int l = 0; l < L; ++l) {
      const double wbar = log_w[static_cast<std::size_t>(l)] / total;
      sum_sq += wbar * wbar;
      for (Eigen::Index d = 0; d < dim; ++d) out.score(i, d) += wbar * u(l, d);
    }
    for (Eigen::Index d = 0; d < dim; ++d)
      out.score(i, d) = (out.score(i, d) - points(i, d)) / (sigma * sigma);
    out.ess[i] = 1.0 / sum_sq;
  }
  return out;
}

Mat sampler_score(ConstMatRef batch, double sigma) {
  const Eigen::Index n = batch.rows();
  const Eigen::Index dim = batch.cols();
  const double inv = 1.0 / (2.0 * sigma * sigma);
  Mat out(n, dim);
  std::vector<double> num(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < n; ++i) {
    double den = 0.0;
    std::fill(num.begin(), num.end(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      double d2 = 0.0;
      for (Eigen::Index d = 0; d < dim; ++d) {
        const double diff = batch(j, d) - batch(i, d);
        d2 += diff * diff;
      }
      const double k = std::exp(-d2 * inv);
      den += k;
      for (Eigen::Index d = 0; d < dim; ++d)
        num[static_cast<std::size_t>(d)] += k * batch(j, d);
    }
    for (Eigen::Index d = 0; d < dim; ++d)
      out(i, d) =
          (num[static_cast<std::size_t>(d)] / den - batch(i, d)) / (sigma * sigma);
  }
  return out;
}

double rbf_kernel_mean(ConstMatRef a, ConstMatRef b, double bandwidth) {
  const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
  double total = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      double d2 = 0.0;
      for (Eigen::Index d = 0; d < a.cols(); ++d) {
        const double diff = a(i, d) - b(j, d);
        d2 += diff * diff;
      }
      row += std::exp(-d2 * inv);
    }
    total += row;
  }
  return total / (static_cast<double>(a.rows()) * static_cast<double>(b.rows()));
}

}  // namespace boltzdrift::kernels::serial
