// Copyright 2026 The phimech Authors.
//
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

#include <benchmark/benchmark.h>

#include "phimech/learning.hpp"
#include "phimech/priors.hpp"

namespace {

using namespace phimech;

void BM_LearnGenerative(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  Rng rng = MakeRng(5);
  const FiniteReports r = SampleTasks(GradingJoint(), m, rng);
  const auto kl = ConvexGenerator::Catalog("kl");
  for (auto _ : state) benchmark::DoNotOptimize(LearnGenerative(kl, r));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * m));
}
BENCHMARK(BM_LearnGenerative)->RangeMultiplier(10)->Range(1000, 100000);

void BM_LearnErmTabular(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  Rng rng = MakeRng(6);
  const FiniteReports r = SampleTasks(GradingJoint(), m, rng);
  const auto kl = ConvexGenerator::Catalog("kl");
  LearnerConfig cfg;
  cfg.method = LearnerMethod::kErm;
  for (auto _ : state) benchmark::DoNotOptimize(LearnErm(kl, r, cfg));
}
BENCHMARK(BM_LearnErmTabular)->RangeMultiplier(10)->Range(1000, 100000);

void BM_LearnErmQuadratic(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  Rng rng = MakeRng(7);
  const RealReports r = SampleTasks(GaussianJoint(0.0, 1.0, 4.0), m, rng);
  const auto kl = ConvexGenerator::Catalog("kl");
  LearnerConfig cfg;
  cfg.method = LearnerMethod::kErm;
  cfg.function_class = FunctionClass::kQuadratic;
  for (auto _ : state) benchmark::DoNotOptimize(LearnErm(kl, r, cfg));
}
BENCHMARK(BM_LearnErmQuadratic)->Arg(3000)->Arg(30000)->Unit(benchmark::kMillisecond);

}  // namespace
