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

#include "phimech/priors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "phimech/errors.hpp"

namespace phimech {
namespace {

void CheckIndex(const FiniteJoint& joint, std::size_t x, std::size_t y) {
  if (x >= joint.rows() || y >= joint.cols())
    throw InvalidInput("signal index out of range");
}

double SupDistance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

bool RowsPairwiseDistinct(const Matrix& m, double tol) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.rows(); ++j)
      if (SupDistance(m.row(i), m.row(j)) <= tol) return false;
  return true;
}

}  // namespace

Marginals GetMarginals(const FiniteJoint& joint) {
  return {FiniteDistribution(joint.row_marginal()), FiniteDistribution(joint.col_marginal())};
}

double Ratio(const FiniteJoint& joint, std::size_t x, std::size_t y) {
  CheckIndex(joint, x, y);
  const double q = joint.row_marginal()[x] * joint.col_marginal()[y];
  if (!(q > 0.0)) throw DomainError("Ratio: zero product marginal at this cell");
  return joint(x, y) / q;
}

Matrix RatioMatrix(const FiniteJoint& joint) {
  Matrix r(joint.rows(), joint.cols());
  for (std::size_t x = 0; x < joint.rows(); ++x)
    for (std::size_t y = 0; y < joint.cols(); ++y) r(x, y) = Ratio(joint, x, y);
  return r;
}

double LogRatio(const GaussianJoint& g, double x, double y) {
  const double s = g.variance();
  const double c = g.covariance();
  const double d = g.covariance_det();
  const double u = x - g.m0;
  const double v = y - g.m0;
  return std::log(s / std::sqrt(d)) + (c / d) * u * v - c * c / (2.0 * d * s) * (u * u + v * v);
}

double Ratio(const GaussianJoint& g, double x, double y) { return std::exp(LogRatio(g, x, y)); }

Matrix ConditionalYGivenX(const FiniteJoint& joint) {
  Matrix m = joint.matrix();
  for (std::size_t x = 0; x < m.rows(); ++x) {
    const double px = joint.row_marginal()[x];
    if (!(px > 0.0)) throw DomainError("ConditionalYGivenX: zero marginal");
    for (double& v : m.row(x)) v /= px;
  }
  return m;
}

Matrix ConditionalXGivenY(const FiniteJoint& joint) {
  Matrix m = joint.matrix().Transpose();
  for (std::size_t y = 0; y < m.rows(); ++y) {
    const double py = joint.col_marginal()[y];
    if (!(py > 0.0)) throw DomainError("ConditionalXGivenY: zero marginal");
    for (double& v : m.row(y)) v /= py;
  }
  return m;
}

bool IsStochasticRelevant(const FiniteJoint& joint, double tol) {
  return RowsPairwiseDistinct(ConditionalYGivenX(joint), tol) &&
         RowsPairwiseDistinct(ConditionalXGivenY(joint), tol);
}

bool IsFineGrained(const FiniteJoint& joint, double tol) {
  const Matrix r = RatioMatrix(joint);
  std::vector<double> values(r.flat().begin(), r.flat().end());
  std::sort(values.begin(), values.end());
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] - values[i - 1] <= tol) return false;
  return true;
}

bool IsStrictlyCorrelated(const FiniteJoint& joint, double tol) {
  if (joint.rows() != joint.cols())
    throw InvalidInput("IsStrictlyCorrelated: needs equally sized signal spaces");
  return std::abs(Determinant(joint.matrix())) > tol;
}

FiniteJoint Pushforward(const FiniteJoint& joint, const StrategyProfile& profile) {
  const Matrix& a = profile.alice.matrix();
  const Matrix& b = profile.bob.matrix();
  if (a.rows() != joint.rows() || b.rows() != joint.cols())
    throw InvalidInput("Pushforward: strategy dimensions do not match the signal spaces");
  Matrix out = a.Transpose() * joint.matrix() * b;
  // Products of stochastic matrices drift from unit mass by a few ulps.
  const double total = out.Sum();
  for (double& v : out.flat()) v /= total;
  return FiniteJoint::AllowDegenerate(std::move(out));
}

FiniteReports SampleTasks(const FiniteJoint& joint, std::size_t m, Rng& rng) {
  if (m == 0) throw InvalidInput("SampleTasks: need at least one task");
  const auto cdf = CumulativeSums(joint.matrix().flat());
  FiniteReports out{joint.rows(), joint.cols(), std::vector<int>(m), std::vector<int>(m)};
  for (std::size_t s = 0; s < m; ++s) {
    const std::size_t cell = SampleFromCdf(cdf, Uniform01(rng));
    out.x[s] = static_cast<int>(cell / joint.cols());
    out.y[s] = static_cast<int>(cell % joint.cols());
  }
  return out;
}

RealReports SampleTasks(const GaussianJoint& g, std::size_t m, Rng& rng) {
  if (m == 0) throw InvalidInput("SampleTasks: need at least one task");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sigma = std::sqrt(g.sigma2);
  const double tau = std::sqrt(g.tau2);
  RealReports out;
  out.x.resize(m);
  out.y.resize(m);
  for (std::size_t s = 0; s < m; ++s) {
    const double mu = g.m0 + sigma * normal(rng);
    out.x[s] = mu + tau * normal(rng);
    out.y[s] = mu + tau * normal(rng);
  }
  return out;
}

CrowdSample SampleTasks(const DawidSkeneModel& model, std::size_t m, Rng& rng) {
  if (m == 0) throw InvalidInput("SampleTasks: need at least one task");
  const auto prior_cdf = CumulativeSums(model.class_prior.weights());
  std::vector<std::vector<std::vector<double>>> conf_cdf(model.n_agents());
  for (std::size_t i = 0; i < model.n_agents(); ++i)
    for (std::size_t z = 0; z < model.n_labels(); ++z)
      conf_cdf[i].push_back(CumulativeSums(model.confusion[i].row(z)));
  CrowdSample out;
  out.labels.resize(m);
  out.reports.assign(model.n_agents(), std::vector<int>(m));
  for (std::size_t s = 0; s < m; ++s) {
    const std::size_t z = SampleFromCdf(prior_cdf, Uniform01(rng));
    out.labels[s] = static_cast<int>(z);
    for (std::size_t i = 0; i < model.n_agents(); ++i)
      out.reports[i][s] = static_cast<int>(SampleFromCdf(conf_cdf[i][z], Uniform01(rng)));
  }
  return out;
}

FiniteJoint GradingJoint() {
  return FiniteJoint(Matrix{{0.20, 0.08, 0.12}, {0.08, 0.04, 0.08}, {0.12, 0.08, 0.20}});
}

FiniteJoint GradingJointFromMixture() {
  const std::vector<double> good{0.2, 0.2, 0.6};
  const std::vector<double> bad{0.6, 0.2, 0.2};
  const Matrix g1 = Outer(good, good);
  const Matrix g0 = Outer(bad, bad);
  Matrix p(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) p(i, j) = 0.5 * g1(i, j) + 0.5 * g0(i, j);
  return FiniteJoint(std::move(p));
}

FiniteJoint IndependentJoint(const FiniteDistribution& px, const FiniteDistribution& py) {
  return FiniteJoint(Outer(px.weights(), py.weights()));
}

FiniteJoint RandomFullSupportJoint(std::size_t nx, std::size_t ny, Rng& rng) {
  if (nx < 2 || ny < 2) throw InvalidInput("RandomFullSupportJoint: need at least 2x2");
  const auto w = SampleSimplex(nx * ny, rng);
  Matrix p(nx, ny);
  std::copy(w.begin(), w.end(), p.flat().begin());
  return FiniteJoint(std::move(p));
}

}  // namespace phimech
