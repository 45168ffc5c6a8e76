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

#include "boltzdrift/config.hpp"

#include <fstream>

#include "boltzdrift/errors.hpp"

namespace boltzdrift {

void RunConfig::validate() const {
  train.validate();
  if (plot_grid < 2) throw InvalidInput("plot_grid must be >= 2");
  if (plot_points < 0) throw InvalidInput("plot_points must be >= 0");
  if (out_dir.empty()) throw InvalidInput("out_dir must not be empty");
}

void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  TrainConfig& t = cfg.train;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "target") t.target = value.get<std::string>();
      else if (key == "sigma") t.drift.sigma = value.get<double>();
      else if (key == "eta") t.drift.eta = value.get<double>();
      else if (key == "estimator")
        t.drift.estimator = parse_estimator(value.get<std::string>());
      else if (key == "num_perturbations") t.drift.num_perturbations = value.get<int>();
      else if (key == "clip_norm") {
        if (value.is_null()) t.drift.clip_norm.reset();
        else t.drift.clip_norm = value.get<double>();
      }
      else if (key == "latent_dim") t.arch.latent_dim = value.get<int>();
      else if (key == "hidden_width") t.arch.hidden_width = value.get<int>();
      else if (key == "num_hidden_blocks") t.arch.num_hidden_blocks = value.get<int>();
      else if (key == "steps") t.steps = value.get<std::int64_t>();
      else if (key == "batch_size") t.batch_size = value.get<std::int64_t>();
      else if (key == "lr") t.lr = value.get<double>();
      else if (key == "seed") t.seed = value.get<std::uint64_t>();
      else if (key == "eval_every") t.eval_every = value.get<std::int64_t>();
      else if (key == "eval_samples") t.eval_samples = value.get<std::int64_t>();
      else if (key == "sequential")
        t.mode = value.get<bool>() ? ExecMode::sequential : ExecMode::parallel;
      else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
      else if (key == "plot_grid") cfg.plot_grid = value.get<int>();
      else if (key == "plot_points") cfg.plot_points = value.get<std::int64_t>();
      else throw InvalidInput("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput("config key '" + key + "': " + e.what());
    }
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  RunConfig cfg;
  apply_config_json(cfg, j);
  return cfg;
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j = to_json(cfg.train);
  j["out_dir"] = cfg.out_dir.string();
  j["plot_grid"] = cfg.plot_grid;
  j["plot_points"] = cfg.plot_points;
  return j;
}

}  // namespace boltzdrift
