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

#include "boltzdrift/kernels.hpp"
#include "boltzdrift/rng.hpp"

namespace boltzdrift::kernels {

namespace parallel {

McOutput target_drift_mc_batch(const EnergyTarget& target, ConstMatRef points,
                               double sigma, int num_perturbations,
                               std::uint64_t stream_seed) {
  const Eigen::Index n = points.rows();
  const Eigen::Index dim = points.cols();
  const int L = num_perturbations;
  McOutput out{Mat::Zero(n, dim), Vec::Zero(n)};
  Eigen::VectorXi bad = Eigen::VectorXi::Zero(n);

#pragma omp parallel
  {
    Mat u(L, dim);
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
      Rng rng(derive_seed(stream_seed, {static_cast<std::uint64_t>(i)}));
      fill_normal(rng, u);
      u = (sigma * u).rowwise() + points.row(i);
      Eigen::ArrayXd log_w = -target.energies(u).array();
      if (!log_w.allFinite()) {
        bad[i] = 1;
        continue;
      }
      log_w = (log_w - log_w.maxCoeff()).exp();
      const Eigen::ArrayXd wbar = log_w / log_w.sum();
      const Eigen::RowVectorXd mean = wbar.matrix().transpose() * u;
      out.score.row(i) = (mean - points.row(i)) / (sigma * sigma);
      out.ess[i] = 1.0 / wbar.square().sum();
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (bad[i]) {
      out.bad_row = i;
      break;
    }
  }
  return out;
}

Mat sampler_score(ConstMatRef batch, double sigma) {
  const Eigen::Index n = batch.rows();
  const double inv = 1.0 / (2.0 * sigma * sigma);
  const Mat bt = batch.transpose();
  const Vec sq = bt.colwise().squaredNorm().transpose();
  Mat out(n, batch.cols());

  constexpr Eigen::Index kTile = 128;
  const Eigen::Index tiles = (n + kTile - 1) / kTile;
#pragma omp parallel for schedule(static)
  for (Eigen::Index t = 0; t < tiles; ++t) {
    const Eigen::Index lo = t * kTile;
    const Eigen::Index rows = std::min(kTile, n - lo);
    // d2(j, i) = |x_j|^2 + |x_i|^2 - 2 x_j . x_i, clamped at 0.
    Mat k = batch * bt.middleCols(lo, rows);
    k = ((-2.0 * k).colwise() + sq).rowwise() +
        sq.segment(lo, rows).transpose();
    k = (-k.array().max(0.0) * inv).exp().matrix();
    const Eigen::RowVectorXd den = k.colwise().sum();
    const Mat num = bt * k;  // dim x rows
    out.middleRows(lo, rows) =
        ((num.array().rowwise() / den.array()).matrix() -
         bt.middleCols(lo, rows))
            .transpose() /
        (sigma * sigma);
  }
  return out;
}

double rbf_kernel_mean(ConstMatRef a, ConstMatRef b, double bandwidth) {
  const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
  const Mat bt = b.transpose();
  Vec row_sums(a.rows());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Eigen::ArrayXd d2 =
        (bt.colwise() - a.row(i).transpose()).colwise().squaredNorm().array();
    row_sums[i] = (-d2 * inv).exp().sum();
  }
  // Ordered sum keeps the result independent of the thread count.
  double total = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) total += row_sums[i];
  return total / (static_cast<double>(a.rows()) * static_cast<double>(b.rows()));
}

}  // namespace parallel

McOutput target_drift_mc_batch(const EnergyTarget& target, ConstMatRef points,
                               double sigma, int num_perturbations,
                               std::uint64_t stream_seed, ExecMode mode) {
  return mode == ExecMode::sequential
             ? serial::target_drift_mc_batch(target, points, sigma,
                                             num_perturbations, stream_seed)
             : parallel::target_drift_mc_batch(target, points, sigma,
                                               num_perturbations, stream_seed);
}

Mat sampler_score(ConstMatRef batch, double sigma, ExecMode mode) {
  return mode == ExecMode::sequential ? serial::sampler_score(batch, sigma)
                                      : parallel::sampler_score(batch, sigma);
}

double rbf_kernel_mean(ConstMatRef a, ConstMatRef b, double bandwidth,
                       ExecMode mode) {
  return mode == ExecMode::sequential
             ? serial::rbf_kernel_mean(a, b, bandwidth)
             : parallel::rbf_kernel_mean(a, b, bandwidth);
}

}  // namespace boltzdrift::kernels
