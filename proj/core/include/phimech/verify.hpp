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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "phimech/divergence.hpp"
#include "phimech/joint.hpp"
#include "phimech/scoring.hpp"

namespace phimech {

// Fixed-seed property suites behind `phimech verify`.

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyResult> results;

  bool all_passed() const;
};

using IdealScorer = std::function<Tabular(const ConvexGenerator&, const FiniteJoint&)>;

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  // Scorer treated as ideal by the suites. Replacing it with a wrong one is
  // how the suites are checked to actually detect failures.
  IdealScorer ideal = IdealFinite;
};

// "identities": exact equalities. "bounds": inequalities fuzzed over random
// priors, strategies and scorers. "learning": learner fixtures and
// consistency at desk scale.
SuiteReport RunIdentitiesSuite(const VerifyOptions& options = {});
SuiteReport RunBoundsSuite(const VerifyOptions& options = {});
SuiteReport RunLearningSuite(const VerifyOptions& options = {});

// Dispatch by name; throws InvalidInput for an unknown suite.
SuiteReport RunSuite(std::string_view name, const VerifyOptions& options = {});
std::vector<std::string> SuiteNames();

}  // namespace phimech
