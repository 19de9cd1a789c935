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

#include "phimech/divergence.hpp"
#include "phimech/priors.hpp"
#include "phimech/scoring.hpp"

namespace {

using namespace phimech;

void BM_MutualInformation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng = MakeRng(1);
  const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
  const auto kl = ConvexGenerator::Catalog("kl");
  for (auto _ : state) benchmark::DoNotOptimize(MutualInformation(kl, p));
}
BENCHMARK(BM_MutualInformation)->RangeMultiplier(4)->Range(2, 128);

void BM_IdealFinite(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng = MakeRng(2);
  const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
  const auto gen = ConvexGenerator::Catalog("hellinger");
  for (auto _ : state) benchmark::DoNotOptimize(IdealFinite(gen, p));
}
BENCHMARK(BM_IdealFinite)->RangeMultiplier(4)->Range(2, 128);

}  // namespace
