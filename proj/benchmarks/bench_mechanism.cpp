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

#include "phimech/mechanism.hpp"
#include "phimech/priors.hpp"
#include "phimech/scoring.hpp"
#include "phimech/strategies.hpp"

namespace {

using namespace phimech;

void BM_ExactExAntePayment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng = MakeRng(3);
  const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
  const auto kl = ConvexGenerator::Catalog("kl");
  const Tabular k = IdealFinite(kl, p);
  const StrategyProfile theta = RandomProfile(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ExactExAntePayment(kl, k, p, theta));
}
BENCHMARK(BM_ExactExAntePayment)->RangeMultiplier(2)->Range(2, 32);

void BM_TaskAveragePayment(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  Rng rng = MakeRng(4);
  const FiniteJoint p = GradingJoint();
  const auto kl = ConvexGenerator::Catalog("kl");
  const Tabular k = IdealFinite(kl, p);
  const FiniteReports r = SampleTasks(p, m, rng);
  for (auto _ : state) benchmark::DoNotOptimize(TaskAveragePayment(kl, k, r));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * m));
}
BENCHMARK(BM_TaskAveragePayment)->RangeMultiplier(10)->Range(300, 300000);

}  // namespace
