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

#include "oracles.hpp"
#include "phimech/joint.hpp"
#include "phimech/linalg.hpp"

namespace testing_support {

inline oracle::Grid ToGrid(const phimech::Matrix& m) {
  oracle::Grid g(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) g[r].assign(m.row(r).begin(), m.row(r).end());
  return g;
}

inline phimech::Matrix ToMatrix(const oracle::Grid& g) {
  phimech::Matrix m(g.size(), g.front().size());
  for (std::size_t r = 0; r < g.size(); ++r)
    for (std::size_t c = 0; c < g[r].size(); ++c) m(r, c) = g[r][c];
  return m;
}

inline std::vector<double> Flatten(const oracle::Grid& g) {
  std::vector<double> out;
  for (const auto& row : g) out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace testing_support
