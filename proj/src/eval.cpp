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

#include "boltzdrift/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "boltzdrift/errors.hpp"
#include "boltzdrift/rng.hpp"

namespace boltzdrift {

namespace {

constexpr std::uint64_t kSubsampleSeed = 0x6d6d642d6277ULL;

void require_nonempty(ConstMatRef a, const char* what) {
  if (a.rows() == 0) throw InvalidInput(std::string(what) + ": empty batch");
}

void require_same_dim(ConstMatRef a, ConstMatRef b, const char* what) {
  if (a.cols() != b.cols())
    throw InvalidInput(std::string(what) + ": dimension mismatch");
}

}  // namespace

double mean_error(ConstMatRef gen, ConstMatRef ref) {
  require_nonempty(gen, "mean_error");
  require_nonempty(ref, "mean_error");
  require_same_dim(gen, ref, "mean_error");
  return (gen.colwise().mean() - ref.colwise().mean()).norm();
}

Mat sample_covariance(ConstMatRef points) {
  if (points.rows() < 2)
    throw InvalidInput("covariance needs at least 2 points");
  const Mat centered = points.rowwise() - points.colwise().mean();
  return centered.transpose() * centered /
         static_cast<double>(points.rows() - 1);
}

double cov_error(ConstMatRef gen, ConstMatRef ref) {
  require_same_dim(gen, ref, "cov_error");
  return (sample_covariance(gen) - sample_covariance(ref)).norm();
}

double median_heuristic_bandwidth(ConstMatRef ref, Eigen::Index max_points) {
  require_nonempty(ref, "median_heuristic_bandwidth");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(ref.rows()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  if (ref.rows() > max_points) {
    Rng rng(derive_seed(kSubsampleSeed, {stream::kMmdSubsample}));
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(static_cast<std::size_t>(max_points));
  }
  const std::size_t m = idx.size();
  std::vector<double> dist;
  dist.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      dist.push_back((ref.row(idx[i]) - ref.row(idx[j])).norm());
  if (dist.empty())
    throw InvalidInput("median heuristic needs at least 2 reference points");
  const std::size_t mid = dist.size() / 2;
  std::nth_element(dist.begin(), dist.begin() + static_cast<long>(mid), dist.end());
  double med = dist[mid];
  if (dist.size() % 2 == 0) {
    const double lower =
        *std::max_element(dist.begin(), dist.begin() + static_cast<long>(mid));
    med = 0.5 * (med + lower);
  }
  return med;
}

MmdResult mmd_rbf(ConstMatRef gen, ConstMatRef ref, std::optional<double> bandwidth,
                  ExecMode mode) {
  require_nonempty(gen, "mmd_rbf");
  require_nonempty(ref, "mmd_rbf");
  require_same_dim(gen, ref, "mmd_rbf");
  const double h = bandwidth ? *bandwidth : median_heuristic_bandwidth(ref);
  if (!(h > 0.0) || !std::isfinite(h))
    throw InvalidInput("mmd_rbf: degenerate bandwidth (reference points identical?)");
  const double kgg = kernels::rbf_kernel_mean(gen, gen, h, mode);
  const double krr = kernels::rbf_kernel_mean(ref, ref, h, mode);
  const double kgr = kernels::rbf_kernel_mean(gen, ref, h, mode);
  // The V-statistic is a squared RKHS norm; clamp rounding below zero.
  return {std::max(0.0, kgg + krr - 2.0 * kgr), h};
}

double mean_energy(const EnergyTarget& target, ConstMatRef points) {
  require_nonempty(points, "mean_energy");
  return target.energies(points).mean();
}

QuadrantCounts quadrant_counts(ConstMatRef points) {
  if (points.cols() != 2) throw InvalidInput("quadrant_counts needs 2D points");
  QuadrantCounts c{0, 0, 0, 0};
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const bool px = points(i, 0) >= 0.0;
    const bool py = points(i, 1) >= 0.0;
    if (px && py) ++c[0];
    else if (!px && py) ++c[1];
    else if (!px && !py) ++c[2];
    else ++c[3];
  }
  return c;
}

MetricsReport evaluate(const EnergyTarget& target, ConstMatRef gen,
                       ConstMatRef ref, ExecMode mode) {
  MetricsReport r;
  r.mean_l2 = mean_error(gen, ref);
  r.cov_frobenius = cov_error(gen, ref);
  const MmdResult mmd = mmd_rbf(gen, ref, std::nullopt, mode);
  r.mmd_rbf = mmd.mmd2;
  r.mmd_bandwidth = mmd.bandwidth;
  r.gen_mean_energy = mean_energy(target, gen);
  r.ref_mean_energy = mean_energy(target, ref);
  if (target.name() == "gmm4") r.quadrant_counts = quadrant_counts(gen);
  r.n_gen = gen.rows();
  r.n_ref = ref.rows();
  return r;
}

nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["mean_l2"] = r.mean_l2;
  j["cov_fro"] = r.cov_frobenius;
  j["mmd_rbf"] = r.mmd_rbf;
  j["mmd_bandwidth"] = r.mmd_bandwidth;
  j["gen_energy"] = r.gen_mean_energy;
  j["ref_energy"] = r.ref_mean_energy;
  if (r.quadrant_counts)
    j["quadrants"] = *r.quadrant_counts;
  else
    j["quadrants"] = nullptr;
  j["n_gen"] = r.n_gen;
  j["n_ref"] = r.n_ref;
  return j;
}

MetricsReport metrics_from_json(const nlohmann::json& j) {
  MetricsReport r;
  try {
    r.mean_l2 = j.at("mean_l2").get<double>();
    r.cov_frobenius = j.at("cov_fro").get<double>();
    r.mmd_rbf = j.at("mmd_rbf").get<double>();
    r.mmd_bandwidth = j.at("mmd_bandwidth").get<double>();
    r.gen_mean_energy = j.at("gen_energy").get<double>();
    r.ref_mean_energy = j.at("ref_energy").get<double>();
    if (!j.at("quadrants").is_null())
      r.quadrant_counts = j.at("quadrants").get<QuadrantCounts>();
    r.n_gen = j.at("n_gen").get<std::int64_t>();
    r.n_ref = j.at("n_ref").get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed metrics JSON: ") + e.what());
  }
  return r;
}

}  // namespace boltzdrift
