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

#include <cstddef>
#include <vector>

namespace phimech {

// Alice's and Bob's reports on m tasks over finite report spaces of sizes nx
// and ny. Task s has the pair (x[s], y[s]).
struct FiniteReports {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<int> x;
  std::vector<int> y;

  std::size_t size() const { return x.size(); }
  FiniteReports Slice(std::size_t begin, std::size_t end) const;
  // Validates sizes and ranges; throws InvalidInput.
  void Validate() const;
};

// Real-valued reports (the Gaussian signal model).
struct RealReports {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return x.size(); }
  RealReports Slice(std::size_t begin, std::size_t end) const;
  void Validate() const;
};

}  // namespace phimech
