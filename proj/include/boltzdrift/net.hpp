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

// One-step generator x = f(z): a residual MLP
//
//   h_0     = W_in z + b_in
//   h_{k+1} = h_k + W2_k silu(W1_k h_k + b1_k) + b2_k,   k = 0..blocks-1
//   x       = W_out h_blocks + b_out
//
// with exactly the gradients needed for the mean squared regression loss.

#ifndef BOLTZDRIFT_NET_HPP
#define BOLTZDRIFT_NET_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "boltzdrift/energy.hpp"

namespace boltzdrift {

struct Architecture {
  int latent_dim = 32;
  int hidden_width = 256;
  int num_hidden_blocks = 3;
  int output_dim = 2;

  void validate() const;
  bool operator==(const Architecture&) const = default;
};

/// One affine map inside the flat parameter vector. The weight is stored
/// row-major (rows = outputs), followed immediately by its bias.
struct LayerSlot {
  Eigen::Index weight_offset;
  Eigen::Index rows;
  Eigen::Index cols;
  Eigen::Index bias_offset() const { return weight_offset + rows * cols; }
  Eigen::Index end() const { return bias_offset() + rows; }
};

/// Flat storage for all weights and biases, in the order
/// input, (block_k.fc1, block_k.fc2) for each block, output.
/// Gradients use the same type.
class GeneratorParams {
 public:
  using RowMajorMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                    Eigen::RowMajor>;
  using WeightMap = Eigen::Map<RowMajorMat>;
  using ConstWeightMap = Eigen::Map<const RowMajorMat>;

  /// All-zero parameters.
  explicit GeneratorParams(const Architecture& arch);

  const Architecture& arch() const { return arch_; }
  const std::vector<LayerSlot>& layers() const { return layers_; }

  Vec& values() { return values_; }
  const Vec& values() const { return values_; }

  WeightMap weight(std::size_t layer);
  ConstWeightMap weight(std::size_t layer) const;
  Eigen::Map<Vec> bias(std::size_t layer);
  Eigen::Map<const Vec> bias(std::size_t layer) const;

  static Eigen::Index parameter_count(const Architecture& arch);

 private:
  Architecture arch_;
  std::vector<LayerSlot> layers_;
  Vec values_;
};

/// Gaussian weights with std 1/sqrt(fan_in), zero biases.
GeneratorParams init_params(const Architecture& arch, std::uint64_t seed);

/// Activations kept for the backward pass. Columns are batch entries.
struct ForwardCache {
  Mat latent;                  // latent_dim x n
  std::vector<Mat> block_in;   // h_k
  std::vector<Mat> pre;        // W1_k h_k + b1_k
  std::vector<Mat> act;        // silu(pre)
  Mat hidden_out;              // h_blocks
  Mat output;                  // output_dim x n
};

/// z_batch is n x latent_dim; the result is n x output_dim.
Mat forward(const GeneratorParams& params, ConstMatRef z_batch);

ForwardCache forward_cached(const GeneratorParams& params, ConstMatRef z_batch);

struct LossAndGrads {
  double loss;
  GeneratorParams grads;
};

/// loss = (1/n) sum_i |f(z_i) - target_i|^2 and its exact gradient.
LossAndGrads mse_loss_and_grads(const GeneratorParams& params,
                                ConstMatRef z_batch, ConstMatRef targets);

/// Same, reusing a forward pass computed with `params`.
LossAndGrads mse_backward(const GeneratorParams& params,
                          const ForwardCache& cache, ConstMatRef targets);

struct AdamState {
  Vec m;
  Vec v;
  std::int64_t step = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState zeros(const Architecture& arch, double lr = 1e-3);
};

struct AdamResult {
  AdamState state;
  GeneratorParams params;
};

/// Bias-corrected Adam. Throws NumericError on non-finite gradients.
AdamResult adam_step(const AdamState& state, const GeneratorParams& params,
                     const GeneratorParams& grads);

}  // namespace boltzdrift

#endif  // BOLTZDRIFT_NET_HPP
