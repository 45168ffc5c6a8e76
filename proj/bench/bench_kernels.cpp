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


// Serial reference kernels against their OpenMP counterparts.
//
//   boltzdrift_bench --benchmark_filter=MmdKernel
//
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "boltzdrift/energy.hpp"
#include "boltzdrift/kernels.hpp"
#include "boltzdrift/rng.hpp"

namespace {

using namespace boltzdrift;

Mat points(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return 2.0 * normal_matrix(rng, n, 2);
}

template <ExecMode Mode>
void BM_TargetDriftMc(benchmark::State& state) {
  const GaussianMixture4 target;
  const Mat x = points(state.range(0), 1);
  const int l = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto out = kernels::target_drift_mc_batch(target, x, 0.22, l, 7, Mode);
    benchmark::DoNotOptimize(out.score.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

template <ExecMode Mode>
void BM_SamplerScore(benchmark::State& state) {
  const Mat x = points(state.range(0), 2);
  for (auto _ : state) {
    Mat s = kernels::sampler_score(x, 0.22, Mode);
    benchmark::DoNotOptimize(s.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <ExecMode Mode>
void BM_MmdKernel(benchmark::State& state) {
  const Mat a = points(state.range(0), 3);
  const Mat b = points(state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::rbf_kernel_mean(a, b, 1.0, Mode));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

BENCHMARK(BM_TargetDriftMc<ExecMode::sequential>)->Args({1024, 256})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TargetDriftMc<ExecMode::parallel>)->Args({1024, 256})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplerScore<ExecMode::sequential>)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplerScore<ExecMode::parallel>)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MmdKernel<ExecMode::sequential>)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MmdKernel<ExecMode::parallel>)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
