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

#include "boltzdrift/drift.hpp"

#include <cmath>
#include <utility>

#include "boltzdrift/errors.hpp"

namespace boltzdrift {

Estimator parse_estimator(const std::string& name) {
  if (name == "mc" || name == "monte_carlo") return Estimator::monte_carlo;
  if (name == "second_order") return Estimator::second_order;
  throw InvalidInput("unknown estimator '" + name +
                     "' (expected mc or second_order)");
}

std::string to_string(Estimator e) {
  return e == Estimator::monte_carlo ? "mc" : "second_order";
}

void DriftConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidInput("drift: sigma must be positive");
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw InvalidInput("drift: eta must be positive");
  if (estimator == Estimator::monte_carlo && num_perturbations < 2)
    throw InvalidInput("drift: the mc estimator needs at least 2 perturbations");
  if (clip_norm && !(*clip_norm > 0.0))
    throw InvalidInput("drift: clip_norm must be positive when set");
}

Vec target_drift_mc(const EnergyTarget& target, ConstVecRef x, double sigma,
                    int num_perturbations, Rng& rng, double* ess) {
  if (!(sigma > 0.0)) throw InvalidInput("target_drift_mc: sigma must be > 0");
  if (num_perturbations < 2)
    throw InvalidInput("target_drift_mc: need at least 2 perturbations");
  if (x.size() != target.dim())
    throw InvalidInput("target_drift_mc: dimension mismatch");

  Mat u = normal_matrix(rng, num_perturbations, x.size());
  u = (sigma * u).rowwise() + x.transpose();
  Eigen::ArrayXd log_w = -target.energies(u).array();
  if (!log_w.allFinite())
    throw NumericError("target_drift_mc: non-finite energy at a perturbation");
  log_w = (log_w - log_w.maxCoeff()).exp();
  const double total = log_w.sum();
  if (!(total > 0.0))
    throw NumericError("target_drift_mc: all importance weights underflowed");
  const Eigen::ArrayXd wbar = log_w / total;
  if (ess != nullptr) *ess = 1.0 / wbar.square().sum();
  const Vec mean = u.transpose() * wbar.matrix();
  return (mean - x) / (sigma * sigma);
}

Vec target_drift_second_order(const EnergyTarget& target, ConstVecRef x,
                              double sigma) {
  if (!(sigma > 0.0))
    throw InvalidInput("target_drift_second_order: sigma must be > 0");
  const Vec g = target.grad_energy(x);
  const Mat m =
      Mat::Identity(x.size(), x.size()) + sigma * sigma * target.hess_energy(x);
  const double det = m.determinant();
  if (!(std::abs(det) >= 1e-10))
    throw SingularCurvature("I + sigma^2 H is singular (det = " +
                            std::to_string(det) + ")");
  return -m.partialPivLu().solve(g);
}

Mat sampler_score_meanshift(ConstMatRef batch, double sigma, ExecMode mode) {
  if (!(sigma > 0.0)) throw InvalidInput("sampler_score: sigma must be > 0");
  if (batch.rows() < 1) throw InvalidInput("sampler_score: empty batch");
  return kernels::sampler_score(batch, sigma, mode);
}

Vec sampler_score_at(ConstMatRef batch, ConstVecRef x, double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("sampler_score: sigma must be > 0");
  if (batch.rows() < 1) throw InvalidInput("sampler_score: empty batch");
  if (batch.cols() != x.size())
    throw InvalidInput("sampler_score: dimension mismatch");
  const Eigen::ArrayXd d2 =
      (batch.rowwise() - x.transpose()).rowwise().squaredNorm().array();
  // Shift by the nearest point so a query far from the batch still has a
  // nonzero denominator.
  const Eigen::ArrayXd k = (-(d2 - d2.minCoeff()) / (2.0 * sigma * sigma)).exp();
  const Vec mean = batch.transpose() * k.matrix() / k.sum();
  return (mean - x) / (sigma * sigma);
}

DriftField assemble_drift(Mat target_side, Mat sampler_side,
                          const DriftConfig& cfg) {
  if (target_side.rows() != sampler_side.rows() ||
      target_side.cols() != sampler_side.cols())
    throw InvalidInput("assemble_drift: shape mismatch");
  DriftField field;
  field.vectors = cfg.eta * (target_side - sampler_side);
  field.target_side = std::move(target_side);
  field.sampler_side = std::move(sampler_side);

  auto& diag = field.diagnostics;
  diag.norms = field.vectors.rowwise().norm();
  if (cfg.clip_norm) {
    for (Eigen::Index i = 0; i < field.vectors.rows(); ++i) {
      if (diag.norms[i] > *cfg.clip_norm) {
        field.vectors.row(i) *= *cfg.clip_norm / diag.norms[i];
        diag.norms[i] = *cfg.clip_norm;
      }
    }
  }
  if (diag.norms.size() > 0) {
    diag.mean_norm = diag.norms.mean();
    diag.max_norm = diag.norms.maxCoeff();
  }
  return field;
}

DriftField drift_field(const EnergyTarget& target, ConstMatRef batch,
                       const DriftConfig& cfg, std::uint64_t stream_seed,
                       ExecMode mode) {
  cfg.validate();
  if (batch.rows() < 1) throw InvalidInput("drift_field: empty batch");
  if (batch.cols() != target.dim())
    throw InvalidInput("drift_field: batch dimension does not match target");

  Mat sampler = sampler_score_meanshift(batch, cfg.sigma, mode);
  Mat target_side(batch.rows(), batch.cols());
  Vec ess;
  std::vector<Eigen::Index> fallbacks;

  if (cfg.estimator == Estimator::monte_carlo) {
    kernels::McOutput mc = kernels::target_drift_mc_batch(
        target, batch, cfg.sigma, cfg.num_perturbations, stream_seed, mode);
    if (mc.bad_row >= 0)
      throw NumericError("drift_field: non-finite energy near batch index " +
                         std::to_string(mc.bad_row));
    target_side = std::move(mc.score);
    ess = std::move(mc.ess);
  } else {
    for (Eigen::Index i = 0; i < batch.rows(); ++i) {
      const Vec x = batch.row(i).transpose();
      try {
        target_side.row(i) =
            target_drift_second_order(target, x, cfg.sigma).transpose();
      } catch (const SingularCurvature& e) {
        if (!cfg.curvature_fallback)
          throw SingularCurvature(std::string(e.what()) + " at batch index " +
                                  std::to_string(i));
        target_side.row(i) = -target.grad_energy(x).transpose();
        fallbacks.push_back(i);
      }
    }
  }

  DriftField field =
      assemble_drift(std::move(target_side), std::move(sampler), cfg);
  if (!field.vectors.allFinite()) {
    for (Eigen::Index i = 0; i < field.vectors.rows(); ++i)
      if (!field.vectors.row(i).allFinite())
        throw NumericError("drift_field: non-finite drift at batch index " +
                           std::to_string(i));
  }
  field.diagnostics.curvature_fallbacks = std::move(fallbacks);
  if (ess.size() > 0) {
    field.diagnostics.ess_mean = ess.mean();
    field.diagnostics.ess = std::move(ess);
  }
  return field;
}

}  // namespace boltzdrift
