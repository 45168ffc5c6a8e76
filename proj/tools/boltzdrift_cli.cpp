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


// boltzdrift command-line tool.
//
//   boltzdrift train  [--config f.json] [flags]
//   boltzdrift sample --checkpoint run/checkpoint.bin [--n 5000] [--output s.csv]
//   boltzdrift eval   --gen s.csv (--ref r.csv | --target gmm4) [--output m.json]
//   boltzdrift oracle --target gmm4 --points p.csv [--sigma 0.22] [--output o.csv]
//   boltzdrift plot   --gen s.csv --target gmm4 [--ref r.csv] [--output fig.svg]
//
// Exit codes: 0 success, 2 usage or configuration error, 3 numeric failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "boltzdrift/checkpoint.hpp"
#include "boltzdrift/config.hpp"
#include "boltzdrift/csv.hpp"
#include "boltzdrift/energy.hpp"
#include "boltzdrift/errors.hpp"
#include "boltzdrift/eval.hpp"
#include "boltzdrift/rng.hpp"
#include "boltzdrift/svg_plot.hpp"
#include "boltzdrift/train.hpp"
#include "boltzdrift/version.hpp"

namespace fs = std::filesystem;
using namespace boltzdrift;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct SharedFlags {
  std::optional<std::string> config;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> target;
  std::optional<double> sigma;
  std::optional<double> eta;
  std::optional<std::string> estimator;
  std::optional<std::int64_t> steps;
  std::optional<std::int64_t> batch_size;
  std::optional<double> lr;
  bool sequential = false;
};

void add_shared(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--config", f.config, "JSON config file with flat keys");
  cmd->add_option("--out-dir", f.out_dir, "Output directory");
  cmd->add_option("--seed", f.seed, "Base seed");
  cmd->add_option("--target", f.target, "Energy target: gmm4, double_well, banana, quadratic");
  cmd->add_option("--sigma", f.sigma, "Smoothing bandwidth");
  cmd->add_option("--eta", f.eta, "Drift step size");
  cmd->add_option("--estimator", f.estimator, "Target drift estimator: mc, second_order");
  cmd->add_option("--steps", f.steps, "Training steps");
  cmd->add_option("--batch-size", f.batch_size, "Training batch size");
  cmd->add_option("--lr", f.lr, "Adam learning rate");
  cmd->add_flag("--sequential", f.sequential,
                "Single-threaded bit-exact mode for reproducible artifacts");
}

// Defaults, then the config file, then explicit flags.
RunConfig resolve_config(const SharedFlags& f) {
  RunConfig cfg = f.config ? load_run_config(*f.config) : RunConfig{};
  TrainConfig& t = cfg.train;
  if (f.out_dir) cfg.out_dir = *f.out_dir;
  if (f.seed) t.seed = *f.seed;
  if (f.target) t.target = *f.target;
  if (f.sigma) t.drift.sigma = *f.sigma;
  if (f.eta) t.drift.eta = *f.eta;
  if (f.estimator) t.drift.estimator = parse_estimator(*f.estimator);
  if (f.steps) t.steps = *f.steps;
  if (f.batch_size) t.batch_size = *f.batch_size;
  if (f.lr) t.lr = *f.lr;
  if (f.sequential) t.mode = ExecMode::sequential;
  cfg.validate();
  return cfg;
}

// The output directory is a location, not a setting, so it stays out of the
// echo and artifacts do not depend on where they were written.
nlohmann::ordered_json config_echo(const RunConfig& cfg) {
  nlohmann::ordered_json j = to_json(cfg);
  j.erase("out_dir");
  return j;
}

nlohmann::ordered_json provenance(const std::string& command, const RunConfig& cfg) {
  nlohmann::ordered_json p;
  p["config"] = config_echo(cfg);
  p["provenance"] = {{"tool", "boltzdrift"},
                     {"version", kVersion},
                     {"command", command},
                     {"estimator", to_string(cfg.train.drift.estimator)},
                     {"sequential", cfg.train.mode == ExecMode::sequential}};
  return p;
}

fs::path output_path(const std::optional<std::string>& explicit_path, const RunConfig& cfg,
                     const char* default_name) {
  if (explicit_path) return *explicit_path;
  return cfg.out_dir / default_name;
}

void ensure_parent(const fs::path& path) {
  const fs::path parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw InvalidInput("cannot create directory '" + parent.string() + "': " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw InvalidInput("write to '" + path.string() + "' failed");
}

Mat load_points(const fs::path& path, int dim, const char* what) {
  Mat pts = read_points_csv(path);
  if (pts.rows() > 0 && pts.cols() != dim)
    throw InvalidInput(std::string(what) + " '" + path.string() + "' has " +
                       std::to_string(pts.cols()) + " columns, expected " +
                       std::to_string(dim));
  if (pts.rows() == 0) pts.resize(0, dim);
  return pts;
}

// Reference draw used by eval and plot when no reference file is given.
std::uint64_t default_reference_seed(std::uint64_t seed) {
  return derive_seed(seed, {stream::kEvalReference});
}

int cmd_train(const SharedFlags& f, bool quiet) {
  const RunConfig cfg = resolve_config(f);
  TrainOutputs outputs;
  outputs.out_dir = cfg.out_dir;
  outputs.provenance = provenance("train", cfg);
  if (!quiet) {
    outputs.on_eval = [](std::int64_t step, const MetricsReport& m) {
      std::cout << "step " << step << "  mean_l2 " << m.mean_l2 << "  cov_fro "
                << m.cov_frobenius << "  mmd_rbf " << m.mmd_rbf << '\n'
                << std::flush;
    };
  }
  train(cfg.train, outputs);
  if (!quiet) std::cout << "wrote " << (cfg.out_dir / "metrics.json").string() << '\n';
  return kExitOk;
}

int cmd_sample(const SharedFlags& f, const std::string& checkpoint, std::int64_t n,
               const std::optional<std::string>& output) {
  const RunConfig cfg = resolve_config(f);
  if (n < 0) throw InvalidInput("--n must be non-negative");
  const Checkpoint ckpt = load_checkpoint(checkpoint, cfg.train.arch);
  const std::uint64_t seed = f.seed ? *f.seed : ckpt.seed;
  const Mat pts = generate(ckpt.params, n, seed);
  const fs::path path = output_path(output, cfg, "samples.csv");
  ensure_parent(path);
  write_points_csv(path, pts);
  return kExitOk;
}

int cmd_eval(const SharedFlags& f, const std::string& gen_path,
             const std::optional<std::string>& ref_path, std::optional<std::int64_t> ref_n,
             std::optional<std::uint64_t> ref_seed, const std::optional<std::string>& output) {
  const RunConfig cfg = resolve_config(f);
  const auto target = make_target(cfg.train.target);
  const Mat gen = load_points(gen_path, target->dim(), "generated samples");
  if (gen.rows() < 2) throw InvalidInput("eval needs at least 2 generated samples");

  nlohmann::ordered_json reference;
  Mat ref;
  if (ref_path) {
    ref = load_points(*ref_path, target->dim(), "reference samples");
    reference = {{"source", "file"}, {"path", *ref_path}};
  } else {
    if (!target->has_reference_sampler())
      throw CapabilityError("target '" + target->name() + "' has no reference sampler");
    const std::int64_t n = ref_n.value_or(gen.rows());
    const std::uint64_t seed = ref_seed.value_or(default_reference_seed(cfg.train.seed));
    ref = target->sample_reference(n, seed).points;
    reference = {{"source", "target"}, {"seed", seed}, {"n", n}};
  }
  if (ref.rows() < 2) throw InvalidInput("eval needs at least 2 reference samples");

  const MetricsReport report = evaluate(*target, gen, ref, cfg.train.mode);
  nlohmann::ordered_json doc;
  doc["metrics"] = to_json(report);
  doc["target"] = target->name();
  doc["target_params"] = target->params();
  doc["reference"] = reference;
  const nlohmann::ordered_json prov = provenance("eval", cfg);
  for (const auto& [k, v] : prov.items()) doc[k] = v;
  const std::string text = doc.dump(2) + "\n";
  write_text(output_path(output, cfg, "eval_metrics.json"), text);
  std::cout << to_json(report).dump(2) << '\n';
  return kExitOk;
}

int cmd_oracle(const SharedFlags& f, const std::string& points_path, int nodes,
               double half_width, const std::optional<std::string>& output) {
  const RunConfig cfg = resolve_config(f);
  const auto target = make_target(cfg.train.target);
  const Mat pts = load_points(points_path, target->dim(), "points");
  GridSpec grid;
  grid.nodes_per_axis = nodes;
  grid.half_width_sigmas = half_width;
  Mat scores(pts.rows(), pts.cols());
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    scores.row(i) =
        smoothed_score_oracle(*target, pts.row(i).transpose(), cfg.train.drift.sigma, grid)
            .transpose();
  }
  const fs::path path = output_path(output, cfg, "oracle.csv");
  ensure_parent(path);
  std::vector<std::string> header;
  for (Eigen::Index c = 0; c < scores.cols(); ++c) header.push_back("g" + std::to_string(c + 1));
  write_points_csv(path, scores, header);
  return kExitOk;
}

int cmd_plot(const SharedFlags& f, const std::string& gen_path,
             const std::optional<std::string>& ref_path, std::optional<int> grid,
             std::optional<std::uint64_t> ref_seed, const std::optional<std::string>& output) {
  RunConfig cfg = resolve_config(f);
  if (grid) cfg.plot_grid = *grid;
  cfg.validate();
  const auto target = make_target(cfg.train.target);
  const Mat gen = load_points(gen_path, target->dim(), "generated samples");
  Mat ref(0, target->dim());
  if (ref_path) {
    ref = load_points(*ref_path, target->dim(), "reference samples");
  } else if (target->has_reference_sampler()) {
    const std::uint64_t seed = ref_seed.value_or(default_reference_seed(cfg.train.seed));
    ref = target->sample_reference(cfg.plot_points, seed).points;
  }
  PlotOptions opts;
  opts.grid = cfg.plot_grid;
  opts.max_points = cfg.plot_points;
  write_text(output_path(output, cfg, "samples.svg"), render_svg(*target, gen, ref, opts));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boltzdrift: one-step Boltzmann samplers trained by smoothed-score drifting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  SharedFlags f_train, f_sample, f_eval, f_oracle, f_plot;

  auto* train_cmd = app.add_subcommand("train", "Train a generator");
  add_shared(train_cmd, f_train);
  bool quiet = false;
  train_cmd->add_flag("--quiet", quiet, "Suppress progress output");

  auto* sample_cmd = app.add_subcommand("sample", "Draw samples from a checkpoint");
  add_shared(sample_cmd, f_sample);
  std::string checkpoint;
  std::int64_t n = 5000;
  std::optional<std::string> sample_out;
  sample_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  sample_cmd->add_option("--n", n, "Number of samples")->capture_default_str();
  sample_cmd->add_option("--output", sample_out, "CSV path (default <out-dir>/samples.csv)");

  auto* eval_cmd = app.add_subcommand("eval", "Compare generated samples with a reference");
  add_shared(eval_cmd, f_eval);
  std::string eval_gen;
  std::optional<std::string> eval_ref, eval_out;
  std::optional<std::int64_t> eval_ref_n;
  std::optional<std::uint64_t> eval_ref_seed;
  eval_cmd->add_option("--gen", eval_gen, "Generated samples CSV")->required();
  eval_cmd->add_option("--ref", eval_ref, "Reference samples CSV (default: draw from target)");
  eval_cmd->add_option("--ref-n", eval_ref_n, "Reference draws (default: generated count)");
  eval_cmd->add_option("--ref-seed", eval_ref_seed, "Reference seed (default: derived from --seed)");
  eval_cmd->add_option("--output", eval_out, "JSON path (default <out-dir>/eval_metrics.json)");

  auto* oracle_cmd = app.add_subcommand("oracle", "Quadrature smoothed score at given points");
  add_shared(oracle_cmd, f_oracle);
  std::string oracle_points;
  int oracle_nodes = GridSpec{}.nodes_per_axis;
  double oracle_half = GridSpec{}.half_width_sigmas;
  std::optional<std::string> oracle_out;
  oracle_cmd->add_option("--points", oracle_points, "Points CSV")->required();
  oracle_cmd->add_option("--nodes", oracle_nodes, "Quadrature nodes per axis")
      ->capture_default_str();
  oracle_cmd->add_option("--half-width", oracle_half, "Grid half width in units of sigma")
      ->capture_default_str();
  oracle_cmd->add_option("--output", oracle_out, "CSV path (default <out-dir>/oracle.csv)");

  auto* plot_cmd = app.add_subcommand("plot", "Render samples over the target density as SVG");
  add_shared(plot_cmd, f_plot);
  std::string plot_gen;
  std::optional<std::string> plot_ref, plot_out;
  std::optional<int> plot_grid;
  std::optional<std::uint64_t> plot_ref_seed;
  plot_cmd->add_option("--gen", plot_gen, "Generated samples CSV")->required();
  plot_cmd->add_option("--ref", plot_ref, "Reference samples CSV (default: draw from target)");
  plot_cmd->add_option("--grid", plot_grid, "Heatmap cells per axis");
  plot_cmd->add_option("--ref-seed", plot_ref_seed, "Reference seed (default: derived from --seed)");
  plot_cmd->add_option("--output", plot_out, "SVG path (default <out-dir>/samples.svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train_cmd) return cmd_train(f_train, quiet);
    if (*sample_cmd) return cmd_sample(f_sample, checkpoint, n, sample_out);
    if (*eval_cmd)
      return cmd_eval(f_eval, eval_gen, eval_ref, eval_ref_n, eval_ref_seed, eval_out);
    if (*oracle_cmd)
      return cmd_oracle(f_oracle, oracle_points, oracle_nodes, oracle_half, oracle_out);
    if (*plot_cmd)
      return cmd_plot(f_plot, plot_gen, plot_ref, plot_grid, plot_ref_seed, plot_out);
  } catch (const TrainingAborted& e) {
    std::cerr << "error: training aborted at step " << e.step << ": " << e.what() << '\n';
    if (e.diagnostics) std::cerr << "diagnostics: " << e.diagnostics->string() << '\n';
    if (e.last_good_checkpoint)
      std::cerr << "last good checkpoint: " << e.last_good_checkpoint->string() << '\n';
    return kExitNumeric;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
