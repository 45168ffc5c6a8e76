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


// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.
//
//   boltzdrift_acceptance [--work-dir DIR] [--only 1,5,6]
//
// Criteria 1-4 train full-size generators (10000 steps each) and dominate the
// runtime.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "boltzdrift/drift.hpp"
#include "boltzdrift/energy.hpp"
#include "boltzdrift/eval.hpp"
#include "boltzdrift/net.hpp"
#include "boltzdrift/rng.hpp"
#include "boltzdrift/train.hpp"
#include "oracles.hpp"

#ifndef BOLTZDRIFT_CLI
#error "BOLTZDRIFT_CLI must point at the boltzdrift executable"
#endif

namespace fs = std::filesystem;
using namespace boltzdrift;

namespace {

// Criterion 1: gmm4 moments, MMD and energy gap.
constexpr double kGmmMeanL2 = 0.15;
constexpr double kGmmCovFro = 0.10;
constexpr double kGmmMmd = 0.01;
constexpr double kGmmEnergyGap = 0.15;
// Criterion 2: quadrant counts out of 5000.
constexpr std::int64_t kQuadrantLo = 1000;
constexpr std::int64_t kQuadrantHi = 1500;
// Criterion 3: double well.
constexpr double kDwMeanL2 = 0.10;
constexpr double kDwMmd = 0.01;
constexpr double kDwHalfPlaneMin = 0.30;
// Criterion 4: banana.
constexpr double kBananaMeanL2 = 0.10;
constexpr double kBananaMmd = 0.01;
// Criterion 5: oracle suite.
constexpr double kSecondOrderVsFormula = 1e-10;
constexpr double kSecondOrderVsQuadrature = 1e-3;
constexpr double kMcVsOracle = 0.05;
constexpr int kMcPerturbations = 100000;
constexpr double kOracleSuiteSeconds = 120.0;
// Criterion 6: gradient check.
constexpr double kGradRelErr = 1e-4;
constexpr double kGradCheckSeconds = 60.0;
// Informational k-means check on the gmm4 generator.
constexpr double kKmeansCenterTol = 0.5;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TrainConfig full_config(const std::string& target) {
  TrainConfig cfg;
  cfg.target = target;
  cfg.drift.sigma = 0.22;
  cfg.drift.eta = 0.22;
  cfg.drift.estimator = Estimator::monte_carlo;
  cfg.drift.num_perturbations = 256;
  cfg.arch = Architecture{32, 256, 3, 2};
  cfg.steps = 10000;
  cfg.batch_size = 1024;
  cfg.lr = 1e-3;
  cfg.seed = 42;
  cfg.eval_every = 500;
  cfg.eval_samples = 5000;
  return cfg;
}

struct TrainedRun {
  TrainConfig cfg;
  TrainResult result;
  Mat generated;  // the final evaluation sample
};

TrainedRun train_target(const std::string& target, const fs::path& work) {
  const TrainConfig cfg = full_config(target);
  TrainOutputs out;
  out.out_dir = work / target;
  out.provenance = {{"provenance", {{"tool", "boltzdrift_acceptance"}}}};
  out.on_eval = [&](std::int64_t step, const MetricsReport& m) {
    std::cout << "  [" << target << "] step " << step << " mean_l2 " << fmt("%.4f", m.mean_l2)
              << " cov_fro " << fmt("%.4f", m.cov_frobenius) << " mmd " << fmt("%.5f", m.mmd_rbf)
              << std::endl;
  };
  const auto t0 = std::chrono::steady_clock::now();
  TrainResult result = train(cfg, out);
  std::cout << "  [" << target << "] trained in " << fmt("%.0f", seconds_since(t0)) << " s"
            << std::endl;
  Mat generated =
      generate(result.state.params, cfg.eval_samples, eval_latent_seed(cfg.seed, cfg.steps));
  return {cfg, std::move(result), std::move(generated)};
}

std::string metrics_line(const MetricsReport& m) {
  return "mean_l2=" + fmt("%.4f", m.mean_l2) + " cov_fro=" + fmt("%.4f", m.cov_frobenius) +
         " mmd=" + fmt("%.5f", m.mmd_rbf) + " gen_energy=" + fmt("%.4f", m.gen_mean_energy) +
         " ref_energy=" + fmt("%.4f", m.ref_mean_energy);
}

Outcome criterion1(const TrainedRun& r) {
  const MetricsReport& m = r.result.metrics;
  const double gap = std::abs(m.gen_mean_energy - m.ref_mean_energy);
  const bool pass = m.mean_l2 <= kGmmMeanL2 && m.cov_frobenius <= kGmmCovFro &&
                    m.mmd_rbf <= kGmmMmd && gap <= kGmmEnergyGap;
  const auto& h = r.result.state.history;
  const double drift_ratio = h.front().mean_drift_norm / h.back().mean_drift_norm;
  return {pass, metrics_line(m) + " energy_gap=" + fmt("%.4f", gap) +
                    " drift_norm_first/last=" + fmt("%.2f", drift_ratio)};
}

Outcome criterion2(const TrainedRun& r) {
  const auto& q = r.result.metrics.quadrant_counts;
  if (!q) return {false, "no quadrant counts"};
  bool pass = true;
  std::string detail = "quadrants=(";
  for (std::size_t k = 0; k < 4; ++k) {
    pass = pass && (*q)[k] >= kQuadrantLo && (*q)[k] <= kQuadrantHi;
    detail += std::to_string((*q)[k]) + (k < 3 ? "," : ")");
  }
  // k-means seeded from the samples; each center must sit near its own mode.
  GaussianMixture4 g;
  const Mat fitted = testing::kmeans(r.generated, testing::kmeans_pp_centers(r.generated, 4, 17));
  std::set<int> matched;
  double worst = 0;
  for (Eigen::Index c = 0; c < fitted.rows(); ++c) {
    int best = 0;
    double dist = INFINITY;
    for (int k = 0; k < 4; ++k) {
      const double d = (fitted.row(c).transpose() - g.centers()[static_cast<std::size_t>(k)]).norm();
      if (d < dist) dist = d, best = k;
    }
    matched.insert(best);
    worst = std::max(worst, dist);
  }
  const bool clusters_ok = matched.size() == 4 && worst <= kKmeansCenterTol;
  detail += " kmeans: distinct_modes=" + std::to_string(matched.size()) +
            " max_center_err=" + fmt("%.3f", worst) + (clusters_ok ? " (ok)" : " (off)");
  return {pass, detail};
}

Outcome criterion3(const TrainedRun& r) {
  const MetricsReport& m = r.result.metrics;
  const Mat& x = r.generated;
  const double left = (x.col(0).array() < 0.0).cast<double>().mean();
  const double right = 1.0 - left;
  const bool pass = m.mean_l2 <= kDwMeanL2 && m.mmd_rbf <= kDwMmd && left >= kDwHalfPlaneMin &&
                    right >= kDwHalfPlaneMin;
  return {pass, metrics_line(m) + " left=" + fmt("%.3f", left) + " right=" + fmt("%.3f", right)};
}

Outcome criterion4(const TrainedRun& r) {
  const MetricsReport& m = r.result.metrics;
  return {m.mean_l2 <= kBananaMeanL2 && m.mmd_rbf <= kBananaMmd, metrics_line(m)};
}

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::ostringstream detail;

  // Second order on quadratic energies.
  double worst_formula = 0, worst_quad = 0;
  std::vector<Mat> precisions;
  Mat a(2, 2);
  a << 1, 0, 0, 1;
  precisions.push_back(a);
  a << 2.0, 0.6, 0.6, 0.9;
  precisions.push_back(a);
  a << 0.3, -0.2, -0.2, 4.0;
  precisions.push_back(a);
  a << -0.5, 0.1, 0.1, 1.5;  // indefinite but I + sigma^2 A stays invertible
  precisions.push_back(a);
  Rng rng(2024);
  for (const Mat& p : precisions) {
    const Eigen::Vector2d m(0.4, -0.7);
    const QuadraticEnergy q(m, p);
    for (double sigma : {0.1, 0.22, 0.5}) {
      for (int i = 0; i < 3; ++i) {
        const Vec x = normal_matrix(rng, 2, 1);
        const Vec formula = -(Mat::Identity(2, 2) + sigma * sigma * p).inverse() * (p * (x - m));
        const Vec so = target_drift_second_order(q, x, sigma);
        worst_formula = std::max(worst_formula, (so - formula).norm());
        worst_quad = std::max(worst_quad, (so - smoothed_score_oracle(q, x, sigma)).norm());
      }
    }
  }
  pass = pass && worst_formula <= kSecondOrderVsFormula && worst_quad <= kSecondOrderVsQuadrature;
  detail << "second_order: formula_err=" << fmt("%.2e", worst_formula)
         << " quadrature_err=" << fmt("%.2e", worst_quad);

  // Monte Carlo at L = 1e5 on 20 fixed cases.
  struct Case {
    const char* target;
    double x1, x2, sigma;
  };
  const std::vector<Case> cases = {
      {"gmm4", 2.0, 2.0, 0.22},      {"gmm4", -1.6, 2.3, 0.22},   {"gmm4", 0.5, -0.5, 0.22},
      {"gmm4", -2.4, -1.5, 0.3},     {"gmm4", 1.0, 0.0, 0.5},     {"gmm4", 2.6, -2.2, 0.15},
      {"gmm4", 0.0, 0.0, 0.22},      {"double_well", 1.0, 0.0, 0.22},
      {"double_well", -0.8, 1.2, 0.22}, {"double_well", 0.0, 0.0, 0.3},
      {"double_well", 1.3, -0.7, 0.5},  {"double_well", -1.1, -2.0, 0.15},
      {"double_well", 0.4, 0.4, 0.22},  {"banana", 0.0, 1.2, 0.22},
      {"banana", 2.0, 0.0, 0.22},    {"banana", -2.5, -0.6, 0.3}, {"banana", 1.0, 2.0, 0.5},
      {"banana", -1.0, 0.0, 0.15},   {"banana", 3.0, -1.5, 0.22}, {"banana", 0.5, 1.0, 0.22},
  };
  double worst_mc = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto t = make_target(cases[i].target);
    const Eigen::Vector2d x(cases[i].x1, cases[i].x2);
    Rng r(derive_seed(5, {i}));
    const Vec mc = target_drift_mc(*t, x, cases[i].sigma, kMcPerturbations, r);
    worst_mc = std::max(worst_mc, (mc - smoothed_score_oracle(*t, x, cases[i].sigma)).norm());
  }
  pass = pass && worst_mc <= kMcVsOracle;
  detail << "; mc_L1e5: cases=" << cases.size() << " worst_err=" << fmt("%.4f", worst_mc);

  // Error decreases as L grows through 1e2 .. 1e5 (RMSE over repeats).
  bool monotone = true;
  for (std::size_t c : {0u, 8u, 14u}) {
    const auto t = make_target(cases[c].target);
    const Eigen::Vector2d x(cases[c].x1, cases[c].x2);
    const Vec truth = smoothed_score_oracle(*t, x, cases[c].sigma);
    double prev = INFINITY;
    for (int L : {100, 1000, 10000, 100000}) {
      double sq = 0;
      const int reps = 8;
      for (int k = 0; k < reps; ++k) {
        Rng r(derive_seed(6, {c, static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(k)}));
        sq += (target_drift_mc(*t, x, cases[c].sigma, L, r) - truth).squaredNorm();
      }
      const double rmse = std::sqrt(sq / reps);
      monotone = monotone && rmse < prev;
      prev = rmse;
    }
  }
  pass = pass && monotone;
  detail << "; L_convergence=" << (monotone ? "monotone" : "NOT monotone");

  const double secs = seconds_since(t0);
  pass = pass && secs <= kOracleSuiteSeconds;
  detail << "; runtime=" << fmt("%.1f", secs) << "s";
  return {pass, detail.str()};
}

Outcome criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  int cases = 0;
  for (int i = 0; i < 20; ++i) {
    const Architecture a{2 + i % 4, 8, i % 4, 2};
    const GeneratorParams p = init_params(a, 100 + static_cast<std::uint64_t>(i));
    Rng rng(derive_seed(7, {static_cast<std::uint64_t>(i)}));
    const Mat z = normal_matrix(rng, 6, a.latent_dim);
    const Mat targets = normal_matrix(rng, 6, 2);
    const Vec g = mse_loss_and_grads(p, z, targets).grads.values();
    const Vec fd = testing::fd_gradient(
        [&](const Vec& v) {
          GeneratorParams q = p;
          q.values() = v;
          return mse_loss_and_grads(q, z, targets).loss;
        },
        p.values(), 1e-5);
    for (Eigen::Index k = 0; k < g.size(); ++k) {
      const double denom = std::max(1e-6, std::abs(fd[k]) + std::abs(g[k]));
      worst = std::max(worst, std::abs(fd[k] - g[k]) / denom);
    }
    ++cases;
  }
  const double secs = seconds_since(t0);
  return {worst <= kGradRelErr && secs <= kGradCheckSeconds,
          "cases=" + std::to_string(cases) + " worst_rel_err=" + fmt("%.2e", worst) +
              " runtime=" + fmt("%.1f", secs) + "s"};
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string("\"") + BOLTZDRIFT_CLI + "\" " + args + " >> \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion7(const fs::path& work) {
  const fs::path root = work / "determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path log = root / "cli.log";
  for (const char* name : {"a", "b"}) {
    const fs::path dir = root / name;
    const std::string common = " --sequential --seed 42 --target gmm4";
    if (run_cli("train --quiet --steps 60 --batch-size 256" + common + " --out-dir " + dir.string(),
                log) != 0 ||
        run_cli("sample --n 2000 --checkpoint " + (dir / "checkpoint.bin").string() + common +
                    " --output " + (dir / "samples.csv").string(),
                log) != 0 ||
        run_cli("plot --gen " + (dir / "samples.csv").string() + common + " --output " +
                    (dir / "samples.svg").string(),
                log) != 0)
      return {false, "CLI invocation failed, see " + log.string()};
  }
  std::string detail;
  bool pass = true;
  for (const char* f : {"checkpoint.bin", "history.csv", "metrics.json", "samples.csv",
                        "samples.svg"}) {
    const std::string a = slurp(root / "a" / f);
    const bool same = !a.empty() && a == slurp(root / "b" / f);
    pass = pass && same;
    detail += std::string(f) + (same ? "=identical " : "=DIFFERENT ");
  }
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / "boltzdrift_acceptance";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--work-dir" && i + 1 < argc) {
      work = argv[++i];
    } else if (arg == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
    } else {
      std::cerr << "usage: " << argv[0] << " [--work-dir DIR] [--only 1,2,...]\n";
      return 2;
    }
  }
  auto selected = [&](int c) { return only.empty() || only.count(c) > 0; };
  fs::create_directories(work);

  std::vector<std::pair<int, Outcome>> results;
  auto record = [&](int c, const char* name, Outcome o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c << " (" << name << "): "
              << o.detail << std::endl;
    results.emplace_back(c, std::move(o));
  };

  // Cheap criteria first so their verdicts appear before the long runs.
  if (selected(5)) record(5, "oracle equivalence", criterion5());
  if (selected(6)) record(6, "gradient check", criterion6());
  if (selected(7)) record(7, "determinism", criterion7(work));
  if (selected(1) || selected(2)) {
    const TrainedRun gmm = train_target("gmm4", work);
    if (selected(1)) record(1, "gmm4 metrics", criterion1(gmm));
    if (selected(2)) record(2, "gmm4 quadrant balance", criterion2(gmm));
  }
  if (selected(3)) record(3, "double_well", criterion3(train_target("double_well", work)));
  if (selected(4)) record(4, "banana", criterion4(train_target("banana", work)));

  int failed = 0;
  for (const auto& [c, o] : results) failed += o.pass ? 0 : 1;
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " criteria FAILED") << " ("
            << results.size() << " evaluated)" << std::endl;
  return failed == 0 ? 0 : 1;
}
