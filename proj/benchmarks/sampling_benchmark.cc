//
// Copyright 2026 The Pancake Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "pancake/distributions.h"
#include "pancake/mechanisms.h"
#include "pancake/rng.h"

namespace pancake {
namespace {

constexpr std::uint64_t kSeed = 20260;

void BM_GaussianNoise(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RngStream rng(kSeed, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SampleStdGaussianVec(d, rng));
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_GaussianNoise)->Arg(256)->Arg(4096)->Arg(65536);

void BM_PancakeNoise(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RngStream rng(kSeed, 0);
  const PancakeParams pp = PancakeParams::Create(
      SampleUniformSphere(d, rng), 1e-4, 2.0 * std::sqrt(static_cast<double>(d)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(SampleHclwe(pp, rng));
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_PancakeNoise)->Arg(256)->Arg(4096)->Arg(65536);

void BM_DiscreteGaussian(benchmark::State& state) {
  RngStream rng(kSeed, 0);
  const double sigma = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Dgm(0, sigma, rng));
  }
}
BENCHMARK(BM_DiscreteGaussian)->Arg(1)->Arg(64)->Arg(4096);

void BM_HaarRotation(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RngStream rng(kSeed, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SampleRotation(d, rng));
  }
}
BENCHMARK(BM_HaarRotation)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_RotatedPancakeMechanism(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RngStream rng(kSeed, 0);
  const PancakeParams pp = PancakeParams::Create(
      SampleUniformSphere(d, rng), 1e-4, 2.0 * std::sqrt(static_cast<double>(d)));
  const Eigen::MatrixXd q_rot = SampleRotation(d, rng);
  const NoiseSource source = PancakeNoiseSource(pp);
  const QueryResult zero = QueryResult::Zero(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(RotatedNoiseMechanism(zero, 1.0, q_rot, source, rng));
  }
}
BENCHMARK(BM_RotatedPancakeMechanism)->Arg(256);

}  // namespace
}  // namespace pancake

BENCHMARK_MAIN();
