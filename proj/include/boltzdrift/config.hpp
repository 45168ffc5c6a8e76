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

#ifndef BOLTZDRIFT_CONFIG_HPP
#define BOLTZDRIFT_CONFIG_HPP

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "boltzdrift/train.hpp"

namespace boltzdrift {

/// Everything a CLI run needs. JSON config files use flat keys:
///
///   target, sigma, eta, estimator, num_perturbations, clip_norm,
///   latent_dim, hidden_width, num_hidden_blocks, steps, batch_size, lr,
///   seed, eval_every, eval_samples, sequential, out_dir, plot_grid,
///   plot_points
///
/// Unknown keys are rejected.
struct RunConfig {
  TrainConfig train;
  std::filesystem::path out_dir = "run";
  int plot_grid = 200;
  std::int64_t plot_points = 2000;

  void validate() const;
};

/// Overwrites the fields present in `j`. Throws InvalidInput on unknown keys
/// or wrongly typed values.
void apply_config_json(RunConfig& cfg, const nlohmann::json& j);

/// Defaults overlaid with the file's contents.
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const RunConfig& cfg);

}  // namespace boltzdrift

#endif  // BOLTZDRIFT_CONFIG_HPP
