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

#ifndef BOLTZDRIFT_ENERGY_HPP
#define BOLTZDRIFT_ENERGY_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "boltzdrift/rng.hpp"

namespace boltzdrift {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using ConstVecRef = Eigen::Ref<const Eigen::VectorXd>;
using ConstMatRef = Eigen::Ref<const Eigen::MatrixXd>;

/// A set of points, one per row, together with the seed that produced them
/// (0 when the points did not come from a seeded draw).
struct SampleBatch {
  Mat points;
  std::uint64_t seed = 0;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
};

/// Unnormalized Boltzmann density p(x) ∝ exp(-E(x)).
///
/// The public entry points validate the input dimension and then dispatch to
/// the protected hooks. Targets without an exact or grid-exact sampler throw
/// CapabilityError from sample_reference().
class EnergyTarget {
 public:
  EnergyTarget(std::string name, int dim);
  virtual ~EnergyTarget() = default;

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }

  double energy(ConstVecRef x) const;
  Vec grad_energy(ConstVecRef x) const;
  Mat hess_energy(ConstVecRef x) const;

  /// Energies of every row of `points`.
  Vec energies(ConstMatRef points) const;

  virtual bool has_reference_sampler() const { return false; }
  SampleBatch sample_reference(Eigen::Index n, std::uint64_t seed) const;

  /// Named real parameters, recorded in run provenance.
  virtual std::map<std::string, double> params() const { return {}; }

 protected:
  virtual double energy_impl(ConstVecRef x) const = 0;
  virtual Vec grad_impl(ConstVecRef x) const = 0;
  virtual Mat hess_impl(ConstVecRef x) const = 0;
  virtual Vec energies_impl(ConstMatRef points) const;
  virtual Mat sample_impl(Rng& rng, Eigen::Index n) const;

 private:
  void check_dim(Eigen::Index n, const char* what) const;

  std::string name_;
  int dim_;
};

/// Four equal-weight isotropic modes at (±c, ±c):
/// E(x) = -log sum_k exp(-|x - mu_k|^2 / (2 s^2)).
class GaussianMixture4 final : public EnergyTarget {
 public:
  explicit GaussianMixture4(double offset = 2.0, double width = 0.5);

  const std::vector<Eigen::Vector2d>& centers() const { return centers_; }
  double width() const { return width_; }

  bool has_reference_sampler() const override { return true; }
  std::map<std::string, double> params() const override;

 protected:
  double energy_impl(ConstVecRef x) const override;
  Vec grad_impl(ConstVecRef x) const override;
  Mat hess_impl(ConstVecRef x) const override;
  Vec energies_impl(ConstMatRef points) const override;
  Mat sample_impl(Rng& rng, Eigen::Index n) const override;

 private:
  double offset_;
  double width_;
  std::vector<Eigen::Vector2d> centers_;
};

/// E(x) = a (x1^2 - 1)^2 + x2^2 / 2 with wells at (±1, 0).
class DoubleWell final : public EnergyTarget {
 public:
  explicit DoubleWell(double barrier = 2.0, int cdf_nodes = 4096,
                      double cdf_half_width = 3.0);

  bool has_reference_sampler() const override { return true; }
  std::map<std::string, double> params() const override;

 protected:
  double energy_impl(ConstVecRef x) const override;
  Vec grad_impl(ConstVecRef x) const override;
  Mat hess_impl(ConstVecRef x) const override;
  Vec energies_impl(ConstMatRef points) const override;
  Mat sample_impl(Rng& rng, Eigen::Index n) const override;

 private:
  double inverse_cdf(double u) const;

  double barrier_;
  std::vector<double> nodes_;
  std::vector<double> cdf_;
};

/// E(x) = x1^2 / 8 + (x2 + b (x1^2 - 4))^2 / 2. Exactly the pushforward of
/// x1 ~ N(0, 4), x2 = z - b (x1^2 - 4), z ~ N(0, 1).
class Banana final : public EnergyTarget {
 public:
  explicit Banana(double curvature = 0.3);

  bool has_reference_sampler() const override { return true; }
  std::map<std::string, double> params() const override;

 protected:
  double energy_impl(ConstVecRef x) const override;
  Vec grad_impl(ConstVecRef x) const override;
  Mat hess_impl(ConstVecRef x) const override;
  Vec energies_impl(ConstMatRef points) const override;
  Mat sample_impl(Rng& rng, Eigen::Index n) const override;

 private:
  double b_;
};

/// E(x) = (x - m)^T A (x - m) / 2. Samples exactly when A is positive
/// definite.
class QuadraticEnergy final : public EnergyTarget {
 public:
  QuadraticEnergy(Vec center, Mat precision);

  /// E(x) = |x|^2 / 2 in `dim` dimensions.
  static QuadraticEnergy isotropic(int dim);

  const Vec& center() const { return center_; }
  const Mat& precision() const { return precision_; }

  bool has_reference_sampler() const override { return positive_definite_; }
  std::map<std::string, double> params() const override;

 protected:
  double energy_impl(ConstVecRef x) const override;
  Vec grad_impl(ConstVecRef x) const override;
  Mat hess_impl(ConstVecRef x) const override;
  Vec energies_impl(ConstMatRef points) const override;
  Mat sample_impl(Rng& rng, Eigen::Index n) const override;

 private:
  Vec center_;
  Mat precision_;
  bool positive_definite_;
  Mat sample_transform_;  // L^{-T} with A = L L^T
};

/// E(x) = c everywhere. Not normalizable; used to isolate estimator noise.
class ConstantEnergy final : public EnergyTarget {
 public:
  explicit ConstantEnergy(int dim, double value = 0.0);

 protected:
  double energy_impl(ConstVecRef x) const override;
  Vec grad_impl(ConstVecRef x) const override;
  Mat hess_impl(ConstVecRef x) const override;

 private:
  double value_;
};

/// Built-in targets: "gmm4", "double_well", "banana", plus "quadratic"
/// (isotropic |x|^2/2 in 2D). Throws InvalidInput for unknown names.
std::unique_ptr<EnergyTarget> make_target(const std::string& name);
std::vector<std::string> target_names();

/// Tensor-product trapezoid grid for the quadrature oracle: `nodes_per_axis`
/// nodes spanning x ± half_width_sigmas * sigma on each axis.
struct GridSpec {
  int nodes_per_axis = 401;
  double half_width_sigmas = 8.0;
};

/// -grad of the smoothed energy at x, i.e. (E_pi[u] - x) / sigma^2 under the
/// local posterior pi(u|x) ∝ exp(-E(u) - |u - x|^2 / (2 sigma^2)), evaluated by
/// quadrature. Two-dimensional targets only. Test oracle, not a training path.
Vec smoothed_score_oracle(const EnergyTarget& target, ConstVecRef x,
                          double sigma, const GridSpec& grid = {});

}  // namespace boltzdrift

#endif  // BOLTZDRIFT_ENERGY_HPP
