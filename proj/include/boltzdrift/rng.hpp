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

#ifndef BOLTZDRIFT_RNG_HPP
#define BOLTZDRIFT_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace boltzdrift {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a path of
/// integer labels (step, point index, purpose tag, ...).
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(base);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

/// Fills `out` with i.i.d. standard normals, row by row.
inline void fill_normal(Rng& rng, Eigen::Ref<Eigen::MatrixXd> out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = normal(rng);
}

inline Eigen::MatrixXd normal_matrix(Rng& rng, Eigen::Index rows,
                                     Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  fill_normal(rng, m);
  return m;
}

// Tags for derive_seed so unrelated consumers of one base seed never share a
// stream.
namespace stream {
inline constexpr std::uint64_t kLatent = 1;
inline constexpr std::uint64_t kPerturbation = 2;
inline constexpr std::uint64_t kEvalLatent = 3;
inline constexpr std::uint64_t kEvalReference = 4;
inline constexpr std::uint64_t kInit = 5;
inline constexpr std::uint64_t kMmdSubsample = 6;
}  // namespace stream

}  // namespace boltzdrift

#endif  // BOLTZDRIFT_RNG_HPP
