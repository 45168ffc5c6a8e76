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

#ifndef BOLTZDRIFT_TRAIN_HPP
#define BOLTZDRIFT_TRAIN_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "boltzdrift/drift.hpp"
#include "boltzdrift/errors.hpp"
#include "boltzdrift/eval.hpp"
#include "boltzdrift/net.hpp"

namespace boltzdrift {

struct TrainConfig {
  std::string target = "gmm4";
  DriftConfig drift;
  Architecture arch;
  std::int64_t steps = 10000;
  std::int64_t batch_size = 1024;
  double lr = 1e-3;
  std::uint64_t seed = 42;
  std::int64_t eval_every = 500;
  std::int64_t eval_samples = 5000;
  ExecMode mode = ExecMode::parallel;

  void validate() const;
};

nlohmann::ordered_json to_json(const TrainConfig& cfg);

struct HistoryRow {
  std::int64_t step;
  double loss;
  double mean_drift_norm;
  std::optional<double> ess_mean;
  std::int64_t curvature_fallbacks = 0;
};

struct TrainState {
  GeneratorParams params;
  AdamState optimizer;
  Rng latent_rng;
  std::int64_t step = 0;
  std::vector<HistoryRow> history;

  /// Fresh parameters and optimizer for `cfg`, latent stream seeded from
  /// cfg.seed.
  static TrainState initial(const TrainConfig& cfg);
};

/// Values captured inside one drift_step, for inspection in tests.
struct StepTrace {
  Mat latents;          // z_i
  Mat outputs;          // x_i = f(z_i) before the update
  Mat frozen_targets;   // x_i + V_i as handed to the regression
  DriftField field;
  double loss_before = 0.0;
};

/// One stop-gradient drifting update: draw z, x = f(z), estimate the drift,
/// freeze x + V, one Adam step on mean |f(z) - (x + V)|^2 with the same z.
/// Throws NumericError on a non-finite drift or loss.
TrainState drift_step(const TrainState& state, const EnergyTarget& target,
                      const TrainConfig& cfg, StepTrace* trace = nullptr);

/// Generates `n` samples from fresh latents drawn with `seed`.
Mat generate(const GeneratorParams& params, Eigen::Index n, std::uint64_t seed);

/// Seeds used by the evaluation at `step`.
std::uint64_t eval_latent_seed(std::uint64_t base, std::int64_t step);
std::uint64_t eval_reference_seed(std::uint64_t base, std::int64_t step);

/// Evaluates the generator against fresh reference samples.
MetricsReport evaluate_generator(const GeneratorParams& params,
                                 const EnergyTarget& target,
                                 const TrainConfig& cfg, std::int64_t step);

struct TrainOutputs {
  /// When set, history.csv, checkpoint.bin(.json), metrics_step_*.json and
  /// metrics.json are written here.
  std::optional<std::filesystem::path> out_dir;
  /// Extra fields merged into every metrics JSON.
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();
  std::function<void(const HistoryRow&)> on_step;
  std::function<void(std::int64_t, const MetricsReport&)> on_eval;
};

struct TrainResult {
  TrainState state;
  MetricsReport metrics;
  std::vector<std::pair<std::int64_t, MetricsReport>> evals;
};

/// Thrown when training stops on a numeric failure. Partial history and a
/// diagnostics file are written first when an output directory is set.
class TrainingAborted : public NumericError {
 public:
  TrainingAborted(const std::string& what, std::int64_t step,
                  std::optional<std::filesystem::path> diagnostics,
                  std::optional<std::filesystem::path> last_good_checkpoint)
      : NumericError(what),
        step(step),
        diagnostics(std::move(diagnostics)),
        last_good_checkpoint(std::move(last_good_checkpoint)) {}

  std::int64_t step;
  std::optional<std::filesystem::path> diagnostics;
  std::optional<std::filesystem::path> last_good_checkpoint;
};

TrainResult train(const TrainConfig& cfg, const TrainOutputs& outputs = {});

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<HistoryRow>& history);

}  // namespace boltzdrift

#endif  // BOLTZDRIFT_TRAIN_HPP
