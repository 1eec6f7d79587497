// Copyright 2026 The qwqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <vector>

#include <benchmark/benchmark.h>

#include "qwqkd/angle.hpp"
#include "qwqkd/protocol/common.hpp"
#include "qwqkd/security.hpp"
#include "qwqkd/sweep.hpp"
#include "qwqkd/walk.hpp"

namespace {

using namespace qwqkd;

void BM_KernelStep(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const WalkParams walk(p, 0.3 * kPi, 0.1 * kPi, 1);
  std::vector<Complex> amps = protocol::basis_buffer(walk.dim(), 0);
  for (auto _ : state) {
    kernels::step(amps, walk);
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KernelStep)->Arg(3)->Arg(13)->Arg(229);

void BM_WalkBasis(benchmark::State& state) {
  const WalkParams walk(static_cast<int>(state.range(0)), 0.3 * kPi, 0.1 * kPi, 100);
  for (auto _ : state) benchmark::DoNotOptimize(walk_basis_amplitudes(walk));
}
BENCHMARK(BM_WalkBasis)->Arg(3)->Arg(11);

void BM_FourierBasis(benchmark::State& state) {
  const WalkParams walk(static_cast<int>(state.range(0)), 0.3 * kPi, 0.1 * kPi, 100);
  for (auto _ : state) benchmark::DoNotOptimize(fourier_amplitudes(walk));
}
BENCHMARK(BM_FourierBasis)->Arg(3)->Arg(11);

void BM_ComputeC(benchmark::State& state) {
  const WalkParams walk(static_cast<int>(state.range(0)), 0.7 * kPi, 0.5 * kPi, 0, Flip::Y);
  const long t_max = state.range(1);
  for (auto _ : state) benchmark::DoNotOptimize(compute_c(walk, t_max).c);
  state.SetItemsProcessed(state.iterations() * t_max);
}
BENCHMARK(BM_ComputeC)->Args({11, 5000})->Args({229, 5000})->Unit(benchmark::kMillisecond);

void BM_SweepCell(benchmark::State& state) {
  const SweepCell cell{static_cast<int>(state.range(0)), Flip::I, 0.4 * kPi, 0.2 * kPi};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_cell(cell, 5000).c);
}
BENCHMARK(BM_SweepCell)->Arg(3)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_MaxToleratedQber(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(max_tolerated_qber(0.054, 11));
}
BENCHMARK(BM_MaxToleratedQber);

void BM_JointDistributionKraus(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const WalkParams walk(p, 0.3 * kPi, 0.1 * kPi, 10);
  const PauliChannel channel = channel_probs(0.2, p);
  for (auto _ : state) benchmark::DoNotOptimize(joint_distribution_kraus(Basis::W, walk, channel).probs().sum());
}
BENCHMARK(BM_JointDistributionKraus)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
