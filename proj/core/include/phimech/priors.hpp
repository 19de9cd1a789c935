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

#include "phimech/joint.hpp"
#include "phimech/linalg.hpp"
#include "phimech/random.hpp"
#include "phimech/reports.hpp"
#include "phimech/strategies.hpp"

namespace phimech {

struct Marginals {
  FiniteDistribution x;
  FiniteDistribution y;
};

Marginals GetMarginals(const FiniteJoint& joint);

// p(x, y) / (p_X(x) p_Y(y)). Throws DomainError when the product is zero and
// InvalidInput for out-of-range indices.
double Ratio(const FiniteJoint& joint, std::size_t x, std::size_t y);
// All cells; requires full-support marginals.
Matrix RatioMatrix(const FiniteJoint& joint);

// Density ratio of the bivariate Gaussian against the product of its two
// N(m0, sigma2 + tau2) marginals. With s = sigma2 + tau2, c = sigma2 and
// D = s^2 - c^2, in centered coordinates:
//   log r = log(s / sqrt(D)) + (c / D) x y - c^2 / (2 D s) (x^2 + y^2).
double LogRatio(const GaussianJoint& g, double x, double y);
double Ratio(const GaussianJoint& g, double x, double y);

// Row x is P[Y | X = x]; row y of the second is P[X | Y = y].
Matrix ConditionalYGivenX(const FiniteJoint& joint);
Matrix ConditionalXGivenY(const FiniteJoint& joint);

// Distinct own signals induce posteriors over the peer's signal that differ by
// more than tol in sup-norm, for both agents.
bool IsStochasticRelevant(const FiniteJoint& joint, double tol = 1e-9);
// The ratio takes pairwise distinct values (beyond tol) over all cells.
bool IsFineGrained(const FiniteJoint& joint, double tol = 1e-9);
// |det p| > tol. Square joints only (InvalidInput otherwise).
bool IsStrictlyCorrelated(const FiniteJoint& joint, double tol = 1e-9);

// Report distribution theta_A^T p theta_B. May lose full support, in which
// case the result reports full_support() == false.
FiniteJoint Pushforward(const FiniteJoint& joint, const StrategyProfile& profile);

// m i.i.d. tasks. Finite: inverse CDF over the row-major flattened cells.
// Gaussian: mu ~ N(m0, sigma2), then x, y ~ N(mu, tau2) independently.
FiniteReports SampleTasks(const FiniteJoint& joint, std::size_t m, Rng& rng);
RealReports SampleTasks(const GaussianJoint& g, std::size_t m, Rng& rng);

// reports[i][s] is agent i's report on task s.
struct CrowdSample {
  std::vector<int> labels;
  std::vector<std::vector<int>> reports;
};
CrowdSample SampleTasks(const DawidSkeneModel& model, std::size_t m, Rng& rng);

// Peer-grading prior: a submission is good or bad with equal probability and each
// reviewer grades on {reject, neutral, accept} independently given quality.
FiniteJoint GradingJoint();
// The same prior assembled as 0.5 g1 g1^T + 0.5 g0 g0^T with
// g1 = (0.2, 0.2, 0.6) and g0 = (0.6, 0.2, 0.2). Agrees with GradingJoint()
// to rounding.
FiniteJoint GradingJointFromMixture();

FiniteJoint IndependentJoint(const FiniteDistribution& px, const FiniteDistribution& py);
// Every cell drawn from a flat Dirichlet over nx * ny cells.
FiniteJoint RandomFullSupportJoint(std::size_t nx, std::size_t ny, Rng& rng);

}  // namespace phimech
