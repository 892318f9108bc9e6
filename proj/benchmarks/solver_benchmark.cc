// Copyright 2026 The trsketch Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdint>

#include "benchmark/benchmark.h"
#include "trsketch/min_norm_qp.h"
#include "trsketch/model.h"
#include "trsketch/projector.h"
#include "trsketch/rng.h"
#include "trsketch/solvers.h"

namespace trsketch {
namespace {

void BM_ProjectorSample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto convention = static_cast<ScalingConvention>(state.range(1));
  uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Projector::Sample(n, 40, convention, seed++));
  }
}
BENCHMARK(BM_ProjectorSample)
    ->ArgsProduct({{500, 4000}, {0, 2}})
    ->Unit(benchmark::kMillisecond);

void BM_GramDeviation(benchmark::State& state) {
  const Projector p = Projector::Sample(static_cast<int>(state.range(0)), 40,
                                        ScalingConvention::kGaussianInvSqrtN, 1);
  for (auto _ : state) benchmark::DoNotOptimize(GramDeviation(p).value);
}
BENCHMARK(BM_GramDeviation)->Arg(500)->Arg(4000)->Unit(benchmark::kMicrosecond);

void BM_SolveBallQp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  const Eigen::MatrixXd g = rng.GaussianMatrix(n, n);
  const Eigen::MatrixXd q = 0.5 * (g + g.transpose());
  const Eigen::VectorXd c = rng.GaussianVector(n);
  for (auto _ : state) benchmark::DoNotOptimize(SolveBallQp(q, c, 1.0).objective);
}
BENCHMARK(BM_SolveBallQp)->RangeMultiplier(4)->Range(8, 512)->Unit(benchmark::kMicrosecond);

void BM_MinNormPoint(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TrsInstance inst = GenerateInstance({.n = n, .m = 50, .seed = 4});
  const Eigen::VectorXd shifted = inst.rhs.array() - 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(MinNormPoint(inst.constraints, shifted).x.data());
  }
}
BENCHMARK(BM_MinNormPoint)->Arg(40)->Arg(200)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_SolveConvexLinear(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const TrsInstance inst = GenerateInstance({.n = 200, .m = 50, .seed = 5});
  const Projector p = Projector::Sample(200, d, ScalingConvention::kGaussianInvSqrtN, 6);
  const ProjectedInstance minus = BuildProjected(inst, p, 0.1, Direction::kMinus);
  for (auto _ : state) benchmark::DoNotOptimize(SolveConvex(minus.View()).objective);
}
BENCHMARK(BM_SolveConvexLinear)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_SolveLocalIndefinite(benchmark::State& state) {
  const TrsInstance inst = GenerateInstance({.n = 20, .m = 10,
                                             .kind = ModelKind::kQuadratic, .rank = 5,
                                             .seed = 7,
                                             .signature = Signature::kIndefinite});
  for (auto _ : state) benchmark::DoNotOptimize(SolveLocal(inst.View()).objective);
}
BENCHMARK(BM_SolveLocalIndefinite)->Unit(benchmark::kMillisecond);

void BM_Fullness(benchmark::State& state) {
  const TrsInstance inst =
      GenerateInstance({.n = static_cast<int>(state.range(0)), .m = 50, .seed = 8});
  for (auto _ : state) benchmark::DoNotOptimize(Fullness(inst.View()).r);
}
BENCHMARK(BM_Fullness)->Arg(40)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace trsketch

BENCHMARK_MAIN();
