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

#include "boltzdrift/net.hpp"

#include <cmath>
#include <string>

#include "boltzdrift/errors.hpp"
#include "boltzdrift/rng.hpp"

namespace boltzdrift {

namespace {

Eigen::ArrayXXd sigmoid(const Eigen::ArrayXXd& a) {
  return 1.0 / (1.0 + (-a).exp());
}

std::size_t input_layer() { return 0; }
std::size_t fc1_layer(int block) { return 1 + 2 * static_cast<std::size_t>(block); }
std::size_t fc2_layer(int block) { return 2 + 2 * static_cast<std::size_t>(block); }
std::size_t output_layer(const Architecture& a) {
  return 1 + 2 * static_cast<std::size_t>(a.num_hidden_blocks);
}

std::vector<LayerSlot> make_layers(const Architecture& a) {
  std::vector<LayerSlot> layers;
  Eigen::Index offset = 0;
  auto add = [&](Eigen::Index rows, Eigen::Index cols) {
    layers.push_back({offset, rows, cols});
    offset = layers.back().end();
  };
  add(a.hidden_width, a.latent_dim);
  for (int k = 0; k < a.num_hidden_blocks; ++k) {
    add(a.hidden_width, a.hidden_width);
    add(a.hidden_width, a.hidden_width);
  }
  add(a.output_dim, a.hidden_width);
  return layers;
}

}  // namespace

void Architecture::validate() const {
  if (latent_dim <= 0 || hidden_width <= 0 || num_hidden_blocks < 0 ||
      output_dim <= 0)
    throw InvalidInput("architecture dimensions must be positive");
}

GeneratorParams::GeneratorParams(const Architecture& arch)
    : arch_(arch), layers_((arch.validate(), make_layers(arch))) {
  values_ = Vec::Zero(layers_.back().end());
}

Eigen::Index GeneratorParams::parameter_count(const Architecture& arch) {
  arch.validate();
  return make_layers(arch).back().end();
}

GeneratorParams::WeightMap GeneratorParams::weight(std::size_t layer) {
  const LayerSlot& s = layers_.at(layer);
  return WeightMap(values_.data() + s.weight_offset, s.rows, s.cols);
}

GeneratorParams::ConstWeightMap GeneratorParams::weight(std::size_t layer) const {
  const LayerSlot& s = layers_.at(layer);
  return ConstWeightMap(values_.data() + s.weight_offset, s.rows, s.cols);
}

Eigen::Map<Vec> GeneratorParams::bias(std::size_t layer) {
  const LayerSlot& s = layers_.at(layer);
  return Eigen::Map<Vec>(values_.data() + s.bias_offset(), s.rows);
}

Eigen::Map<const Vec> GeneratorParams::bias(std::size_t layer) const {
  const LayerSlot& s = layers_.at(layer);
  return Eigen::Map<const Vec>(values_.data() + s.bias_offset(), s.rows);
}

GeneratorParams init_params(const Architecture& arch, std::uint64_t seed) {
  GeneratorParams p(arch);
  Rng rng(derive_seed(seed, {stream::kInit}));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t l = 0; l < p.layers().size(); ++l) {
    auto w = p.weight(l);
    const double scale = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = scale * normal(rng);
  }
  return p;
}

ForwardCache forward_cached(const GeneratorParams& params, ConstMatRef z_batch) {
  const Architecture& a = params.arch();
  if (z_batch.cols() != a.latent_dim)
    throw InvalidInput("forward: expected " + std::to_string(a.latent_dim) +
                       " latent columns, got " + std::to_string(z_batch.cols()));
  ForwardCache c;
  c.latent = z_batch.transpose();
  Mat h = params.weight(input_layer()) * c.latent;
  h.colwise() += params.bias(input_layer());
  c.block_in.reserve(static_cast<std::size_t>(a.num_hidden_blocks));
  c.pre.reserve(c.block_in.capacity());
  c.act.reserve(c.block_in.capacity());
  for (int k = 0; k < a.num_hidden_blocks; ++k) {
    Mat pre = params.weight(fc1_layer(k)) * h;
    pre.colwise() += params.bias(fc1_layer(k));
    Mat act = (pre.array() * sigmoid(pre.array())).matrix();
    Mat next = h;
    next.noalias() += params.weight(fc2_layer(k)) * act;
    next.colwise() += params.bias(fc2_layer(k));
    c.block_in.push_back(std::move(h));
    c.pre.push_back(std::move(pre));
    c.act.push_back(std::move(act));
    h = std::move(next);
  }
  c.output = params.weight(output_layer(a)) * h;
  c.output.colwise() += params.bias(output_layer(a));
  c.hidden_out = std::move(h);
  return c;
}

Mat forward(const GeneratorParams& params, ConstMatRef z_batch) {
  return forward_cached(params, z_batch).output.transpose();
}

LossAndGrads mse_backward(const GeneratorParams& params,
                          const ForwardCache& cache, ConstMatRef targets) {
  const Architecture& a = params.arch();
  const Eigen::Index n = cache.output.cols();
  if (targets.rows() != n || targets.cols() != a.output_dim)
    throw InvalidInput("mse: targets must be " + std::to_string(n) + " x " +
                       std::to_string(a.output_dim));
  if (n == 0) throw InvalidInput("mse: empty batch");

  const Mat residual = cache.output - targets.transpose();
  LossAndGrads out{residual.squaredNorm() / static_cast<double>(n),
                   GeneratorParams(a)};
  GeneratorParams& g = out.grads;

  Mat d_out = (2.0 / static_cast<double>(n)) * residual;
  const std::size_t lo = output_layer(a);
  g.weight(lo).noalias() = d_out * cache.hidden_out.transpose();
  g.bias(lo) = d_out.rowwise().sum();
  Mat d_h = params.weight(lo).transpose() * d_out;

  for (int k = a.num_hidden_blocks - 1; k >= 0; --k) {
    const auto ks = static_cast<std::size_t>(k);
    const std::size_t l1 = fc1_layer(k);
    const std::size_t l2 = fc2_layer(k);
    g.weight(l2).noalias() = d_h * cache.act[ks].transpose();
    g.bias(l2) = d_h.rowwise().sum();
    const Mat d_act = params.weight(l2).transpose() * d_h;
    const Eigen::ArrayXXd sig = sigmoid(cache.pre[ks].array());
    // silu'(a) = sigma(a) (1 + a (1 - sigma(a)))
    const Mat d_pre =
        (d_act.array() * sig * (1.0 + cache.pre[ks].array() * (1.0 - sig)))
            .matrix();
    g.weight(l1).noalias() = d_pre * cache.block_in[ks].transpose();
    g.bias(l1) = d_pre.rowwise().sum();
    d_h.noalias() += params.weight(l1).transpose() * d_pre;
  }

  g.weight(input_layer()).noalias() = d_h * cache.latent.transpose();
  g.bias(input_layer()) = d_h.rowwise().sum();
  return out;
}

LossAndGrads mse_loss_and_grads(const GeneratorParams& params,
                                ConstMatRef z_batch, ConstMatRef targets) {
  if (targets.rows() != z_batch.rows())
    throw InvalidInput("mse: targets and latents differ in row count");
  return mse_backward(params, forward_cached(params, z_batch), targets);
}

AdamState AdamState::zeros(const Architecture& arch, double lr) {
  const Eigen::Index n = GeneratorParams::parameter_count(arch);
  AdamState s;
  s.m = Vec::Zero(n);
  s.v = Vec::Zero(n);
  s.lr = lr;
  return s;
}

AdamResult adam_step(const AdamState& state, const GeneratorParams& params,
                     const GeneratorParams& grads) {
  const Vec& g = grads.values();
  if (g.size() != params.values().size() || state.m.size() != g.size() ||
      state.v.size() != g.size())
    throw InvalidInput("adam_step: shape mismatch");
  if (!g.allFinite()) throw NumericError("adam_step: non-finite gradient");

  AdamResult r{state, params};
  AdamState& s = r.state;
  s.step += 1;
  s.m = state.beta1 * state.m + (1.0 - state.beta1) * g;
  s.v = state.beta2 * state.v + (1.0 - state.beta2) * g.cwiseAbs2();
  const double t = static_cast<double>(s.step);
  const double c1 = 1.0 - std::pow(s.beta1, t);
  const double c2 = 1.0 - std::pow(s.beta2, t);
  r.params.values().array() -=
      s.lr * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + s.epsilon);
  return r;
}

}  // namespace boltzdrift
