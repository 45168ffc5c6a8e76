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

#include "boltzdrift/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "boltzdrift/errors.hpp"

namespace boltzdrift {

EnergyTarget::EnergyTarget(std::string name, int dim)
    : name_(std::move(name)), dim_(dim) {
  if (dim <= 0) throw InvalidInput("energy target dimension must be positive");
}

void EnergyTarget::check_dim(Eigen::Index n, const char* what) const {
  if (n != dim_) {
    throw InvalidInput(std::string(what) + ": expected dimension " +
                       std::to_string(dim_) + " for target '" + name_ +
                       "', got " + std::to_string(n));
  }
}

double EnergyTarget::energy(ConstVecRef x) const {
  check_dim(x.size(), "energy");
  return energy_impl(x);
}

Vec EnergyTarget::grad_energy(ConstVecRef x) const {
  check_dim(x.size(), "grad_energy");
  return grad_impl(x);
}

Mat EnergyTarget::hess_energy(ConstVecRef x) const {
  check_dim(x.size(), "hess_energy");
  return hess_impl(x);
}

Vec EnergyTarget::energies(ConstMatRef points) const {
  check_dim(points.cols(), "energies");
  return energies_impl(points);
}

Vec EnergyTarget::energies_impl(ConstMatRef points) const {
  Vec out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    out[i] = energy_impl(points.row(i).transpose());
  return out;
}

SampleBatch EnergyTarget::sample_reference(Eigen::Index n,
                                           std::uint64_t seed) const {
  if (n < 0) throw InvalidInput("sample_reference: n must be non-negative");
  if (!has_reference_sampler())
    throw CapabilityError("target '" + name_ + "' has no reference sampler");
  Rng rng(seed);
  return SampleBatch{sample_impl(rng, n), seed};
}

Mat EnergyTarget::sample_impl(Rng&, Eigen::Index) const {
  throw CapabilityError("target '" + name_ + "' has no reference sampler");
}

// ---------------------------------------------------------------------------
// GaussianMixture4

GaussianMixture4::GaussianMixture4(double offset, double width)
    : EnergyTarget("gmm4", 2), offset_(offset), width_(width) {
  if (!(width > 0.0)) throw InvalidInput("gmm4 width must be positive");
  // Quadrant order: (+,+), (-,+), (-,-), (+,-).
  centers_ = {{offset, offset}, {-offset, offset}, {-offset, -offset},
              {offset, -offset}};
}

std::map<std::string, double> GaussianMixture4::params() const {
  return {{"offset", offset_}, {"width", width_}};
}

double GaussianMixture4::energy_impl(ConstVecRef x) const {
  const double inv = 1.0 / (2.0 * width_ * width_);
  double logits[4];
  for (int k = 0; k < 4; ++k)
    logits[k] = -(x - centers_[k]).squaredNorm() * inv;
  const double mx = *std::max_element(logits, logits + 4);
  double s = 0.0;
  for (double l : logits) s += std::exp(l - mx);
  return -(mx + std::log(s));
}

Vec GaussianMixture4::grad_impl(ConstVecRef x) const {
  const double s2 = width_ * width_;
  double logits[4];
  for (int k = 0; k < 4; ++k)
    logits[k] = -(x - centers_[k]).squaredNorm() / (2.0 * s2);
  const double mx = *std::max_element(logits, logits + 4);
  double r[4];
  double total = 0.0;
  for (int k = 0; k < 4; ++k) total += (r[k] = std::exp(logits[k] - mx));
  Vec g = Vec::Zero(2);
  for (int k = 0; k < 4; ++k) g += (r[k] / total) * (x - centers_[k]);
  return g / s2;
}

Mat GaussianMixture4::hess_impl(ConstVecRef x) const {
  // H = I/s^2 - (sum_k r_k d_k d_k^T - dbar dbar^T) / s^4, d_k = x - mu_k.
  const double s2 = width_ * width_;
  double logits[4];
  for (int k = 0; k < 4; ++k)
    logits[k] = -(x - centers_[k]).squaredNorm() / (2.0 * s2);
  const double mx = *std::max_element(logits, logits + 4);
  double r[4];
  double total = 0.0;
  for (int k = 0; k < 4; ++k) total += (r[k] = std::exp(logits[k] - mx));
  Eigen::Vector2d dbar = Eigen::Vector2d::Zero();
  Eigen::Matrix2d second = Eigen::Matrix2d::Zero();
  for (int k = 0; k < 4; ++k) {
    const Eigen::Vector2d d = x - centers_[k];
    const double w = r[k] / total;
    dbar += w * d;
    second += w * d * d.transpose();
  }
  Mat h = Mat::Identity(2, 2) / s2 -
          (second - dbar * dbar.transpose()) / (s2 * s2);
  return h;
}

Vec GaussianMixture4::energies_impl(ConstMatRef points) const {
  const Eigen::Index n = points.rows();
  const double inv = 1.0 / (2.0 * width_ * width_);
  Eigen::ArrayXXd logits(n, 4);
  for (int k = 0; k < 4; ++k) {
    logits.col(k) = -((points.col(0).array() - centers_[k].x()).square() +
                      (points.col(1).array() - centers_[k].y()).square()) *
                    inv;
  }
  const Eigen::ArrayXd mx = logits.rowwise().maxCoeff();
  const Eigen::ArrayXd s = (logits.colwise() - mx).exp().rowwise().sum();
  return -(mx + s.log()).matrix();
}

Mat GaussianMixture4::sample_impl(Rng& rng, Eigen::Index n) const {
  std::uniform_int_distribution<int> mode(0, 3);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat out(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = centers_[static_cast<std::size_t>(mode(rng))];
    out(i, 0) = c.x() + width_ * normal(rng);
    out(i, 1) = c.y() + width_ * normal(rng);
  }
  return out;
}

// ---------------------------------------------------------------------------
// DoubleWell

DoubleWell::DoubleWell(double barrier, int cdf_nodes, double cdf_half_width)
    : EnergyTarget("double_well", 2), barrier_(barrier) {
  if (!(barrier > 0.0)) throw InvalidInput("double_well barrier must be > 0");
  if (cdf_nodes < 2) throw InvalidInput("double_well needs >= 2 CDF nodes");
  // Trapezoid-integrated CDF of the x1 marginal on a uniform grid, inverted
  // by linear interpolation. x2 is exactly N(0, 1).
  nodes_.resize(static_cast<std::size_t>(cdf_nodes));
  cdf_.resize(nodes_.size());
  const double step = 2.0 * cdf_half_width / (cdf_nodes - 1);
  std::vector<double> dens(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    nodes_[i] = -cdf_half_width + step * static_cast<double>(i);
    const double q = nodes_[i] * nodes_[i] - 1.0;
    dens[i] = std::exp(-barrier_ * q * q);
  }
  cdf_[0] = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    cdf_[i] = cdf_[i - 1] + 0.5 * step * (dens[i - 1] + dens[i]);
  const double total = cdf_.back();
  for (double& c : cdf_) c /= total;
}

std::map<std::string, double> DoubleWell::params() const {
  return {{"barrier", barrier_},
          {"cdf_nodes", static_cast<double>(nodes_.size())},
          {"cdf_half_width", -nodes_.front()}};
}

double DoubleWell::energy_impl(ConstVecRef x) const {
  const double q = x[0] * x[0] - 1.0;
  return barrier_ * q * q + 0.5 * x[1] * x[1];
}

Vec DoubleWell::grad_impl(ConstVecRef x) const {
  Vec g(2);
  g << 4.0 * barrier_ * x[0] * (x[0] * x[0] - 1.0), x[1];
  return g;
}

Mat DoubleWell::hess_impl(ConstVecRef x) const {
  Mat h = Mat::Zero(2, 2);
  h(0, 0) = barrier_ * (12.0 * x[0] * x[0] - 4.0);
  h(1, 1) = 1.0;
  return h;
}

Vec DoubleWell::energies_impl(ConstMatRef points) const {
  const Eigen::ArrayXd q = points.col(0).array().square() - 1.0;
  return (barrier_ * q.square() + 0.5 * points.col(1).array().square())
      .matrix();
}

double DoubleWell::inverse_cdf(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return nodes_.front();
  if (it == cdf_.end()) return nodes_.back();
  const auto hi = static_cast<std::size_t>(it - cdf_.begin());
  const std::size_t lo = hi - 1;
  const double span = cdf_[hi] - cdf_[lo];
  const double t = span > 0.0 ? (u - cdf_[lo]) / span : 0.0;
  return nodes_[lo] + t * (nodes_[hi] - nodes_[lo]);
}

Mat DoubleWell::sample_impl(Rng& rng, Eigen::Index n) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat out(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i, 0) = inverse_cdf(uniform(rng));
    out(i, 1) = normal(rng);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Banana

Banana::Banana(double curvature) : EnergyTarget("banana", 2), b_(curvature) {}

std::map<std::string, double> Banana::params() const {
  return {{"curvature", b_}};
}

double Banana::energy_impl(ConstVecRef x) const {
  const double r = x[1] + b_ * (x[0] * x[0] - 4.0);
  return x[0] * x[0] / 8.0 + 0.5 * r * r;
}

Vec Banana::grad_impl(ConstVecRef x) const {
  const double r = x[1] + b_ * (x[0] * x[0] - 4.0);
  Vec g(2);
  g << x[0] / 4.0 + 2.0 * b_ * x[0] * r, r;
  return g;
}

Mat Banana::hess_impl(ConstVecRef x) const {
  const double r = x[1] + b_ * (x[0] * x[0] - 4.0);
  const double dr = 2.0 * b_ * x[0];
  Mat h(2, 2);
  h << 0.25 + 2.0 * b_ * r + dr * dr, dr, dr, 1.0;
  return h;
}

Vec Banana::energies_impl(ConstMatRef points) const {
  const Eigen::ArrayXd x1 = points.col(0).array();
  const Eigen::ArrayXd r = points.col(1).array() + b_ * (x1.square() - 4.0);
  return (x1.square() / 8.0 + 0.5 * r.square()).matrix();
}

Mat Banana::sample_impl(Rng& rng, Eigen::Index n) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat out(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x1 = 2.0 * normal(rng);
    out(i, 0) = x1;
    out(i, 1) = normal(rng) - b_ * (x1 * x1 - 4.0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// QuadraticEnergy

QuadraticEnergy::QuadraticEnergy(Vec center, Mat precision)
    : EnergyTarget("quadratic", static_cast<int>(center.size())),
      center_(std::move(center)),
      precision_(std::move(precision)),
      positive_definite_(false) {
  if (precision_.rows() != center_.size() ||
      precision_.cols() != center_.size())
    throw InvalidInput("quadratic: precision must be dim x dim");
  if (!precision_.isApprox(precision_.transpose()))
    throw InvalidInput("quadratic: precision must be symmetric");
  Eigen::LLT<Mat> llt(precision_);
  if (llt.info() == Eigen::Success) {
    positive_definite_ = true;
    const Mat l = llt.matrixL();
    sample_transform_ =
        l.transpose().triangularView<Eigen::Upper>().solve(
            Mat::Identity(center_.size(), center_.size()));
  }
}

QuadraticEnergy QuadraticEnergy::isotropic(int dim) {
  return QuadraticEnergy(Vec::Zero(dim), Mat::Identity(dim, dim));
}

std::map<std::string, double> QuadraticEnergy::params() const {
  std::map<std::string, double> p;
  for (Eigen::Index i = 0; i < center_.size(); ++i)
    p["center_" + std::to_string(i)] = center_[i];
  for (Eigen::Index i = 0; i < precision_.rows(); ++i)
    for (Eigen::Index j = 0; j < precision_.cols(); ++j)
      p["precision_" + std::to_string(i) + std::to_string(j)] =
          precision_(i, j);
  return p;
}

double QuadraticEnergy::energy_impl(ConstVecRef x) const {
  const Vec d = x - center_;
  return 0.5 * d.dot(precision_ * d);
}

Vec QuadraticEnergy::grad_impl(ConstVecRef x) const {
  return precision_ * (x - center_);
}

Mat QuadraticEnergy::hess_impl(ConstVecRef) const { return precision_; }

Vec QuadraticEnergy::energies_impl(ConstMatRef points) const {
  const Mat d = points.rowwise() - center_.transpose();
  return 0.5 * (d * precision_).cwiseProduct(d).rowwise().sum();
}

Mat QuadraticEnergy::sample_impl(Rng& rng, Eigen::Index n) const {
  const Mat z = normal_matrix(rng, n, center_.size());
  return (z * sample_transform_.transpose()).rowwise() + center_.transpose();
}

// ---------------------------------------------------------------------------
// ConstantEnergy

ConstantEnergy::ConstantEnergy(int dim, double value)
    : EnergyTarget("constant", dim), value_(value) {}

double ConstantEnergy::energy_impl(ConstVecRef) const { return value_; }
Vec ConstantEnergy::grad_impl(ConstVecRef) const { return Vec::Zero(dim()); }
Mat ConstantEnergy::hess_impl(ConstVecRef) const {
  return Mat::Zero(dim(), dim());
}

// ---------------------------------------------------------------------------

std::unique_ptr<EnergyTarget> make_target(const std::string& name) {
  if (name == "gmm4") return std::make_unique<GaussianMixture4>();
  if (name == "double_well") return std::make_unique<DoubleWell>();
  if (name == "banana") return std::make_unique<Banana>();
  if (name == "quadratic")
    return std::make_unique<QuadraticEnergy>(QuadraticEnergy::isotropic(2));
  throw InvalidInput("unknown target '" + name +
                     "' (expected gmm4, double_well, banana or quadratic)");
}

std::vector<std::string> target_names() {
  return {"gmm4", "double_well", "banana", "quadratic"};
}

// ---------------------------------------------------------------------------

Vec smoothed_score_oracle(const EnergyTarget& target, ConstVecRef x,
                          double sigma, const GridSpec& grid) {
  if (!(sigma > 0.0)) throw InvalidInput("oracle: sigma must be positive");
  if (grid.nodes_per_axis < 50)
    throw InvalidInput("oracle: grid too coarse (" +
                       std::to_string(grid.nodes_per_axis) +
                       " nodes per axis, need at least 50)");
  if (!(grid.half_width_sigmas > 0.0))
    throw InvalidInput("oracle: grid half width must be positive");
  if (target.dim() != 2)
    throw InvalidInput("oracle: only two-dimensional targets are supported");
  if (x.size() != 2) throw InvalidInput("oracle: point must be 2-dimensional");

  const int m = grid.nodes_per_axis;
  const double half = grid.half_width_sigmas * sigma;
  const double h = 2.0 * half / (m - 1);
  Vec offsets(m);
  Vec trap = Vec::Ones(m);
  trap[0] = trap[m - 1] = 0.5;
  for (int i = 0; i < m; ++i) offsets[i] = -half + h * i;

  Mat nodes(static_cast<Eigen::Index>(m) * m, 2);
  Vec log_w(nodes.rows());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const Eigen::Index r = static_cast<Eigen::Index>(i) * m + j;
      nodes(r, 0) = x[0] + offsets[i];
      nodes(r, 1) = x[1] + offsets[j];
      log_w[r] = std::log(trap[i] * trap[j]) -
                 (offsets[i] * offsets[i] + offsets[j] * offsets[j]) /
                     (2.0 * sigma * sigma);
    }
  }
  log_w -= target.energies(nodes);
  const double mx = log_w.maxCoeff();
  if (!std::isfinite(mx))
    throw NumericError("oracle: log-integrand is not finite on the grid");
  const Vec w = (log_w.array() - mx).exp().matrix();
  const double total = w.sum();
  const Eigen::RowVectorXd mean = (w.transpose() * nodes) / total;
  return (mean.transpose() - x) / (sigma * sigma);
}

}  // namespace boltzdrift
