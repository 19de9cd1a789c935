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

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace phimech {

using Rng = std::mt19937_64;

// Seed for an independent stream `stream` of a run seeded with `base`
// (splitmix64 finalizer over the pair). Replicate r of an experiment uses
// DeriveSeed(seed, r), which keeps parallel replicates reproducible.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream);

inline Rng MakeRng(std::uint64_t seed) { return Rng(seed); }

double Uniform01(Rng& rng);

// Symmetric Dirichlet(1) draw: a uniform point of the (n-1)-simplex.
std::vector<double> SampleSimplex(std::size_t n, Rng& rng);

// Index drawn from the cumulative distribution `cdf` (nondecreasing, last
// entry ~1). Falls back to the last index when rounding leaves u > cdf.back().
std::size_t SampleFromCdf(std::span<const double> cdf, double u);

std::vector<double> CumulativeSums(std::span<const double> weights);

}  // namespace phimech
