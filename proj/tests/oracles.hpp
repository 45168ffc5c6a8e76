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


// Reference computations used only by the test suites. Each one is written
// independently of the library code it checks.

#ifndef BOLTZDRIFT_TESTS_ORACLES_HPP
#define BOLTZDRIFT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "boltzdrift/energy.hpp"

namespace boltzdrift::testing {

// Smoothed score of the four-mode mixture in closed form. Convolving
// sum_k exp(-|u - m_k|^2 / (2 s^2)) with a Gaussian of width sigma gives a
// mixture with variance s^2 + sigma^2 per mode.
inline Eigen::Vector2d gmm4_smoothed_score(const Eigen::Vector2d& x, double sigma,
                                           double offset = 2.0, double width = 0.5) {
  const double var = width * width + sigma * sigma;
  const double c[4][2] = {{offset, offset}, {-offset, offset}, {-offset, -offset}, {offset, -offset}};
  double logs[4];
  double top = -1e300;
  for (int k = 0; k < 4; ++k) {
    const double dx = x[0] - c[k][0], dy = x[1] - c[k][1];
    logs[k] = -(dx * dx + dy * dy) / (2 * var);
    top = std::max(top, logs[k]);
  }
  double z = 0;
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  for (int k = 0; k < 4; ++k) {
    const double w = std::exp(logs[k] - top);
    z += w;
    acc += w * Eigen::Vector2d(c[k][0] - x[0], c[k][1] - x[1]);
  }
  return acc / (z * var);
}

// Gauss-Hermite nodes and weights for the weight exp(-t^2) via the
// Golub-Welsch eigenvalue method.
inline void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) j(i, i - 1) = j(i - 1, i) = std::sqrt(i / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = std::sqrt(M_PI) * v0 * v0;
  }
}

// (E[u | x] - x) / sigma^2 with u ~ N(x, sigma^2 I) reweighted by exp(-E(u)),
// by tensor Gauss-Hermite quadrature in 2D.
inline Eigen::Vector2d gauss_hermite_smoothed_score(const EnergyTarget& target,
                                                    const Eigen::Vector2d& x, double sigma,
                                                    int n = 80) {
  std::vector<double> t, w;
  gauss_hermite(n, t, w);
  std::vector<double> logw;
  std::vector<Eigen::Vector2d> pts;
  logw.reserve(n * n);
  pts.reserve(n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Eigen::Vector2d d(std::sqrt(2.0) * sigma * t[a], std::sqrt(2.0) * sigma * t[b]);
      pts.push_back(d);
      logw.push_back(std::log(w[a] * w[b]) - target.energy(x + d));
    }
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double z = 0;
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double e = std::exp(logw[i] - top);
    z += e;
    acc += e * pts[i];
  }
  return acc / (z * sigma * sigma);
}

inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   Eigen::VectorXd x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2 * h);
  }
  return g;
}

inline Eigen::MatrixXd fd_hessian(const EnergyTarget& target, const Eigen::VectorXd& x,
                                  double h = 1e-5) {
  Eigen::MatrixXd hess(x.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    hess.col(i) = (target.grad_energy(xp) - target.grad_energy(xm)) / (2 * h);
  }
  return 0.5 * (hess + hess.transpose());
}

inline double rbf(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b, double h) {
  return std::exp(-(a - b).squaredNorm() / (2 * h * h));
}

// Biased MMD^2 by direct double loops.
inline double naive_mmd2(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double h) {
  auto mean_k = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    double s = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < b.rows(); ++j) s += rbf(a.row(i), b.row(j), h);
    return s / static_cast<double>(a.rows() * b.rows());
  };
  return mean_k(x, x) + mean_k(y, y) - 2 * mean_k(x, y);
}

// Median of all pairwise distances by full sort.
inline double naive_median_distance(const Eigen::MatrixXd& x) {
  std::vector<double> d;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = i + 1; j < x.rows(); ++j) d.push_back((x.row(i) - x.row(j)).norm());
  std::sort(d.begin(), d.end());
  const std::size_t m = d.size();
  return m % 2 ? d[m / 2] : 0.5 * (d[m / 2 - 1] + d[m / 2]);
}

// Sampler-side mean-shift score at row i by direct summation.
inline Eigen::RowVectorXd naive_meanshift(const Eigen::MatrixXd& x, Eigen::Index i, double sigma) {
  double z = 0;
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(x.cols());
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    const double k = rbf(x.row(j), x.row(i), sigma);
    z += k;
    acc += k * x.row(j);
  }
  return (acc / z - x.row(i)) / (sigma * sigma);
}

// k-means++ seeding with a fixed generator.
inline Eigen::MatrixXd kmeans_pp_centers(const Eigen::MatrixXd& x, Eigen::Index k,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd centers(k, x.cols());
  std::uniform_int_distribution<Eigen::Index> first(0, x.rows() - 1);
  centers.row(0) = x.row(first(rng));
  Eigen::VectorXd d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (Eigen::Index c = 1; c < k; ++c) {
    std::discrete_distribution<Eigen::Index> pick(d2.data(), d2.data() + d2.size());
    centers.row(c) = x.row(pick(rng));
    d2 = d2.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

// Lloyd's k-means from the given starting centers.
inline Eigen::MatrixXd kmeans(const Eigen::MatrixXd& x, Eigen::MatrixXd centers, int iters = 100) {
  const Eigen::Index k = centers.rows();
  for (int it = 0; it < iters; ++it) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, x.cols());
    Eigen::VectorXd cnt = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      Eigen::Index best = 0;
      (centers.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&best);
      sum.row(best) += x.row(i);
      cnt[best] += 1;
    }
    for (Eigen::Index c = 0; c < k; ++c)
      if (cnt[c] > 0) centers.row(c) = sum.row(c) / cnt[c];
  }
  return centers;
}

}  // namespace boltzdrift::testing

#endif  // BOLTZDRIFT_TESTS_ORACLES_HPP
