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

#include "boltzdrift/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "boltzdrift/checkpoint.hpp"
#include "boltzdrift/csv.hpp"
#include "boltzdrift/errors.hpp"

namespace boltzdrift {

void TrainConfig::validate() const {
  drift.validate();
  arch.validate();
  if (steps < 1) throw InvalidInput("steps must be >= 1");
  if (batch_size < 2) throw InvalidInput("batch_size must be >= 2");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw InvalidInput("lr must be positive");
  if (eval_every < 1) throw InvalidInput("eval_every must be >= 1");
  if (eval_samples < 2) throw InvalidInput("eval_samples must be >= 2");
  auto t = make_target(target);
  if (t->dim() != arch.output_dim)
    throw InvalidInput("target dimension " + std::to_string(t->dim()) +
                       " does not match generator output_dim " +
                       std::to_string(arch.output_dim));
}

nlohmann::ordered_json to_json(const TrainConfig& cfg) {
  nlohmann::ordered_json j;
  j["target"] = cfg.target;
  j["sigma"] = cfg.drift.sigma;
  j["eta"] = cfg.drift.eta;
  j["estimator"] = to_string(cfg.drift.estimator);
  j["num_perturbations"] = cfg.drift.num_perturbations;
  if (cfg.drift.clip_norm)
    j["clip_norm"] = *cfg.drift.clip_norm;
  else
    j["clip_norm"] = nullptr;
  j["latent_dim"] = cfg.arch.latent_dim;
  j["hidden_width"] = cfg.arch.hidden_width;
  j["num_hidden_blocks"] = cfg.arch.num_hidden_blocks;
  j["steps"] = cfg.steps;
  j["batch_size"] = cfg.batch_size;
  j["lr"] = cfg.lr;
  j["seed"] = cfg.seed;
  j["eval_every"] = cfg.eval_every;
  j["eval_samples"] = cfg.eval_samples;
  j["sequential"] = cfg.mode == ExecMode::sequential;
  return j;
}

TrainState TrainState::initial(const TrainConfig& cfg) {
  return TrainState{init_params(cfg.arch, cfg.seed),
                    AdamState::zeros(cfg.arch, cfg.lr),
                    Rng(derive_seed(cfg.seed, {stream::kLatent})), 0, {}};
}

TrainState drift_step(const TrainState& state, const EnergyTarget& target,
                      const TrainConfig& cfg, StepTrace* trace) {
  TrainState next = state;
  const std::int64_t step = state.step + 1;

  // 1. latents and generated batch
  const Mat z = normal_matrix(next.latent_rng, cfg.batch_size, cfg.arch.latent_dim);
  const ForwardCache cache = forward_cached(next.params, z);
  const Mat x = cache.output.transpose();
  if (!x.allFinite())
    throw NumericError("generator produced non-finite samples at step " +
                       std::to_string(step));

  // 2-3. sampler- and target-side estimates, combined drift
  DriftConfig dcfg = cfg.drift;
  dcfg.curvature_fallback = true;
  DriftField field = drift_field(
      target, x, dcfg,
      derive_seed(cfg.seed, {stream::kPerturbation, static_cast<std::uint64_t>(step)}),
      cfg.mode);

  // 4. frozen targets; nothing below recomputes them
  const Mat frozen = x + field.vectors;

  // 5. regression on the same latents
  LossAndGrads lg = mse_backward(next.params, cache, frozen);
  if (!std::isfinite(lg.loss))
    throw NumericError("non-finite loss at step " + std::to_string(step));
  AdamResult updated = adam_step(next.optimizer, next.params, lg.grads);
  next.params = std::move(updated.params);
  next.optimizer = std::move(updated.state);
  next.step = step;
  next.history.push_back(
      {step, lg.loss, field.diagnostics.mean_norm, field.diagnostics.ess_mean,
       static_cast<std::int64_t>(field.diagnostics.curvature_fallbacks.size())});

  if (trace != nullptr) {
    trace->latents = z;
    trace->outputs = x;
    trace->frozen_targets = frozen;
    trace->loss_before = lg.loss;
    trace->field = std::move(field);
  }
  return next;
}

Mat generate(const GeneratorParams& params, Eigen::Index n, std::uint64_t seed) {
  if (n < 0) throw InvalidInput("generate: n must be non-negative");
  Rng rng(seed);
  const Mat z = normal_matrix(rng, n, params.arch().latent_dim);
  if (n == 0) return Mat(0, params.arch().output_dim);
  return forward(params, z);
}

std::uint64_t eval_latent_seed(std::uint64_t base, std::int64_t step) {
  return derive_seed(base, {stream::kEvalLatent, static_cast<std::uint64_t>(step)});
}

std::uint64_t eval_reference_seed(std::uint64_t base, std::int64_t step) {
  return derive_seed(base,
                     {stream::kEvalReference, static_cast<std::uint64_t>(step)});
}

MetricsReport evaluate_generator(const GeneratorParams& params,
                                 const EnergyTarget& target,
                                 const TrainConfig& cfg, std::int64_t step) {
  const Mat gen = generate(params, cfg.eval_samples, eval_latent_seed(cfg.seed, step));
  const SampleBatch ref =
      target.sample_reference(cfg.eval_samples, eval_reference_seed(cfg.seed, step));
  return evaluate(target, gen, ref.points, cfg.mode);
}

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<HistoryRow>& history) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  out << "step,loss,mean_drift_norm,ess_mean\n";
  for (const HistoryRow& r : history) {
    out << r.step << ',' << format_double(r.loss) << ','
        << format_double(r.mean_drift_norm) << ','
        << (r.ess_mean ? format_double(*r.ess_mean) : std::string("nan")) << '\n';
  }
}

namespace {

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
}

nlohmann::ordered_json metrics_document(const MetricsReport& report,
                                        std::int64_t step, const TrainConfig& cfg,
                                        const EnergyTarget& target,
                                        const TrainOutputs& outputs) {
  nlohmann::ordered_json doc;
  doc["step"] = step;
  doc["metrics"] = to_json(report);
  doc["config"] = to_json(cfg);
  doc["target_params"] = target.params();
  doc["eval_seeds"] = {{"latent", eval_latent_seed(cfg.seed, step)},
                       {"reference", eval_reference_seed(cfg.seed, step)}};
  for (const auto& [k, v] : outputs.provenance.items()) doc[k] = v;
  return doc;
}

double quantile(Vec v, double q) {
  if (v.size() == 0) return std::nan("");
  std::sort(v.data(), v.data() + v.size());
  const auto idx = static_cast<Eigen::Index>(q * static_cast<double>(v.size() - 1));
  return v[idx];
}

struct ScopedEigenThreads {
  explicit ScopedEigenThreads(int n) : saved(Eigen::nbThreads()) {
    Eigen::setNbThreads(n);
  }
  ~ScopedEigenThreads() { Eigen::setNbThreads(saved); }
  int saved;
};

}  // namespace

TrainResult train(const TrainConfig& cfg, const TrainOutputs& outputs) {
  cfg.validate();
  const auto target = make_target(cfg.target);
  std::optional<ScopedEigenThreads> threads;
  if (cfg.mode == ExecMode::sequential) threads.emplace(1);

  const auto& dir = outputs.out_dir;
  if (dir) std::filesystem::create_directories(*dir);
  const auto ckpt_path = dir ? std::optional(*dir / "checkpoint.bin") : std::nullopt;
  bool have_checkpoint = false;

  TrainResult result{TrainState::initial(cfg), {}, {}};
  TrainState& state = result.state;
  StepTrace trace;
  std::optional<DriftDiagnostics> last_diag;

  auto run_eval = [&](std::int64_t step) {
    MetricsReport m = evaluate_generator(state.params, *target, cfg, step);
    result.evals.emplace_back(step, m);
    if (dir) {
      char name[64];
      std::snprintf(name, sizeof(name), "metrics_step_%06lld.json",
                    static_cast<long long>(step));
      write_json(*dir / name, metrics_document(m, step, cfg, *target, outputs));
      save_checkpoint(*ckpt_path, Checkpoint{state.params, state.optimizer, cfg.seed});
      have_checkpoint = true;
    }
    if (outputs.on_eval) outputs.on_eval(step, m);
    return m;
  };

  while (state.step < cfg.steps) {
    try {
      state = drift_step(state, *target, cfg, &trace);
    } catch (const NumericError& e) {
      std::optional<std::filesystem::path> diag_path;
      if (dir) {
        write_history_csv(*dir / "history.csv", state.history);
        nlohmann::ordered_json d;
        d["failed_step"] = state.step + 1;
        d["error"] = e.what();
        if (last_diag) {
          d["last_good_step"] = state.step;
          d["drift_norm_quantiles"] = {{"min", quantile(last_diag->norms, 0.0)},
                                       {"p50", quantile(last_diag->norms, 0.5)},
                                       {"p90", quantile(last_diag->norms, 0.9)},
                                       {"p99", quantile(last_diag->norms, 0.99)},
                                       {"max", quantile(last_diag->norms, 1.0)}};
          if (last_diag->ess.size() > 0)
            d["ess"] = {{"mean", last_diag->ess.mean()},
                        {"min", last_diag->ess.minCoeff()}};
        }
        if (have_checkpoint) d["last_good_checkpoint"] = ckpt_path->string();
        diag_path = *dir / "diagnostics.json";
        write_json(*diag_path, d);
      }
      throw TrainingAborted(e.what(), state.step + 1, diag_path,
                            have_checkpoint ? ckpt_path : std::nullopt);
    }
    last_diag = trace.field.diagnostics;
    if (outputs.on_step) outputs.on_step(state.history.back());
    if (state.step % cfg.eval_every == 0 || state.step == cfg.steps) {
      result.metrics = run_eval(state.step);
    }
  }

  if (dir) {
    write_history_csv(*dir / "history.csv", state.history);
    write_json(*dir / "metrics.json",
               metrics_document(result.metrics, state.step, cfg, *target, outputs));
  }
  return result;
}

}  // namespace boltzdrift
