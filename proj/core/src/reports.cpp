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

#include "phimech/reports.hpp"

#include <cmath>
#include <string>

#include "phimech/errors.hpp"

namespace phimech {

FiniteReports FiniteReports::Slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > size()) throw InvalidInput("FiniteReports::Slice: bad range");
  FiniteReports out{nx, ny, {}, {}};
  out.x.assign(x.begin() + begin, x.begin() + end);
  out.y.assign(y.begin() + begin, y.begin() + end);
  return out;
}

void FiniteReports::Validate() const {
  if (x.size() != y.size()) throw InvalidInput("FiniteReports: Alice and Bob report counts differ");
  for (std::size_t s = 0; s < x.size(); ++s) {
    if (x[s] < 0 || static_cast<std::size_t>(x[s]) >= nx ||
        y[s] < 0 || static_cast<std::size_t>(y[s]) >= ny)
      throw InvalidInput("FiniteReports: report out of range at task " + std::to_string(s));
  }
}

RealReports RealReports::Slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > size()) throw InvalidInput("RealReports::Slice: bad range");
  RealReports out;
  out.x.assign(x.begin() + begin, x.begin() + end);
  out.y.assign(y.begin() + begin, y.begin() + end);
  return out;
}

void RealReports::Validate() const {
  if (x.size() != y.size()) throw InvalidInput("RealReports: Alice and Bob report counts differ");
  for (std::size_t s = 0; s < x.size(); ++s)
    if (!std::isfinite(x[s]) || !std::isfinite(y[s]))
      throw InvalidInput("RealReports: non-finite report at task " + std::to_string(s));
}

}  // namespace phimech
