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

#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "phimech/divergence.hpp"
#include "phimech/errors.hpp"

namespace phimech {
namespace {

using testing_support::ToGrid;
using testing_support::ToMatrix;

TEST(FiniteJointInvariants, Rejections) {
  EXPECT_THROW(FiniteJoint(Matrix{{0.5, 0.5}}), InvalidInput);                    // one row
  EXPECT_THROW(FiniteJoint(Matrix{{0.5, 0.2}, {0.2, 0.2}}), InvalidInput);        // mass 1.1
  EXPECT_THROW(FiniteJoint(Matrix{{0.6, -0.1}, {0.3, 0.2}}), InvalidInput);       // negative
  EXPECT_THROW(FiniteJoint(Matrix{{0.5, 0.5}, {0.0, 0.0}}), InvalidInput);        // empty row
  EXPECT_NO_THROW(FiniteJoint::AllowDegenerate(Matrix{{0.5, 0.5}, {0.0, 0.0}}));
  EXPECT_FALSE(FiniteJoint::AllowDegenerate(Matrix{{0.5, 0.5}, {0.0, 0.0}}).full_support());
}

TEST(GaussianJointInvariants, Rejections) {
  EXPECT_THROW(GaussianJoint(0.0, 0.0, 1.0), InvalidInput);
  EXPECT_THROW(GaussianJoint(0.0, 1.0, -1.0), InvalidInput);
  EXPECT_THROW(GaussianJoint(std::nan(""), 1.0, 1.0), InvalidInput);
}

TEST(Marginals, Examples) {
  const Marginals m = GetMarginals(GradingJoint());
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(m.x[i], i == 1 ? 0.2 : 0.4, 1e-15);
    EXPECT_NEAR(m.y[i], i == 1 ? 0.2 : 0.4, 1e-15);
  }
  const Marginals u = GetMarginals(FiniteJoint(Matrix(2, 2, 0.25)));
  EXPECT_EQ(u.x[0], 0.5);
  EXPECT_EQ(u.y[1], 0.5);
}

TEST(Fixture, MatchesMixtureConstruction) {
  EXPECT_LE(MaxAbsDiff(GradingJoint().matrix(), GradingJointFromMixture().matrix()), 1e-15);
  EXPECT_LE(MaxAbsDiff(GradingJoint().matrix(), ToMatrix(oracle::GradingPrior())), 0.0);
}

TEST(Ratio, GradingPrior) {
  const FiniteJoint p = GradingJoint();
  EXPECT_NEAR(Ratio(p, 0, 0), 1.25, 1e-12);
  EXPECT_NEAR(Ratio(p, 0, 2), 0.75, 1e-12);
  EXPECT_NEAR(Ratio(p, 1, 1), 1.00, 1e-12);
  const Matrix expected{{1.25, 1.0, 0.75}, {1.0, 1.0, 1.0}, {0.75, 1.0, 1.25}};
  EXPECT_LE(MaxAbsDiff(RatioMatrix(p), expected), 1e-12);
}

TEST(Ratio, ZeroProductIsDomainError) {
  const FiniteJoint p = FiniteJoint::AllowDegenerate(Matrix{{0.5, 0.5}, {0.0, 0.0}});
  EXPECT_THROW(Ratio(p, 1, 0), DomainError);
  EXPECT_NO_THROW(Ratio(p, 0, 0));
}

TEST(Ratio, IndependentIsOne) {
  const FiniteJoint p = IndependentJoint(FiniteDistribution({0.1, 0.3, 0.6}), FiniteDistribution({0.7, 0.3}));
  const Matrix r = RatioMatrix(p);
  for (double v : r.flat()) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Ratio, AveragesToOneUnderProduct) {
  Rng rng = MakeRng(DeriveSeed(3, 0));
  for (int i = 0; i < 50; ++i) {
    const FiniteJoint p = RandomFullSupportJoint(2 + i % 4, 2 + (i / 4) % 4, rng);
    const Matrix r = RatioMatrix(p);
    const Matrix q = p.ProductOfMarginals();
    double s = 0.0;
    for (std::size_t c = 0; c < r.size(); ++c) s += q.flat()[c] * r.flat()[c];
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Ratio, GaussianAtOrigin) {
  const GaussianJoint g(0.0, 1.0, 4.0);
  EXPECT_NEAR(Ratio(g, 0.0, 0.0), std::sqrt(25.0 / 24.0), 1e-12);
  EXPECT_NEAR(oracle::GaussianRatio(0.0, 0.0, 0.0, 1.0, 4.0), std::sqrt(25.0 / 24.0), 1e-12);
}

TEST(Ratio, GaussianMatchesDensityQuotient) {
  Rng rng = MakeRng(DeriveSeed(3, 1));
  for (const GaussianJoint g : {GaussianJoint(0.0, 1.0, 4.0), GaussianJoint(1.5, 2.0, 0.3),
                                GaussianJoint(-2.0, 0.5, 0.5)}) {
    for (int i = 0; i < 100; ++i) {
      const double x = g.m0 + 6 * (Uniform01(rng) - 0.5), y = g.m0 + 6 * (Uniform01(rng) - 0.5);
      const double want = oracle::GaussianRatio(x, y, g.m0, g.sigma2, g.tau2);
      EXPECT_NEAR(Ratio(g, x, y), want, 1e-10 * want);
      EXPECT_NEAR(LogRatio(g, x, y), std::log(want), 1e-10);
    }
  }
}

TEST(Conditionals, GradingPrior) {
  const Matrix yx = ConditionalYGivenX(GradingJoint());
  const Matrix expected{{0.5, 0.2, 0.3}, {0.4, 0.2, 0.4}, {0.3, 0.2, 0.5}};
  EXPECT_LE(MaxAbsDiff(yx, expected), 1e-12);
  // Rows are indexed by y; the fixture is symmetric so they coincide.
  EXPECT_LE(MaxAbsDiff(ConditionalXGivenY(GradingJoint()), expected), 1e-12);
}

TEST(Classifiers, GradingPrior) {
  const FiniteJoint p = GradingJoint();
  EXPECT_TRUE(IsStochasticRelevant(p));
  EXPECT_FALSE(IsFineGrained(p));
  EXPECT_FALSE(IsStrictlyCorrelated(p));
  EXPECT_NEAR(Determinant(p.matrix()), 0.0, 1e-12);
}

TEST(Classifiers, ProductPriorIsNotRelevant) {
  const FiniteJoint p = IndependentJoint(FiniteDistribution({0.2, 0.8}), FiniteDistribution({0.5, 0.5}));
  EXPECT_FALSE(IsStochasticRelevant(p));
}

TEST(Classifiers, DuplicatedRowIsNotRelevant) {
  Matrix m{{0.20, 0.08, 0.12}, {0.08, 0.04, 0.08}, {0.20, 0.08, 0.12}};
  for (double& v : m.flat()) v /= 1.0;
  const double total = m.Sum();
  for (double& v : m.flat()) v /= total;
  EXPECT_FALSE(IsStochasticRelevant(FiniteJoint(m)));
}

TEST(Classifiers, DiagonalJoint) {
  const FiniteJoint diag(Matrix{{0.5, 0.0, 0.0}, {0.0, 0.3, 0.0}, {0.0, 0.0, 0.2}});
  EXPECT_TRUE(IsStrictlyCorrelated(diag));
  EXPECT_NEAR(Determinant(diag.matrix()), 0.03, 1e-15);
  EXPECT_TRUE(IsStochasticRelevant(diag));
  // Off-diagonal cells all have ratio 0, so under the pairwise-distinct reading
  // of the ratio values the diagonal joint is not fine-grained.
  EXPECT_FALSE(IsFineGrained(diag));
}

TEST(Classifiers, FineGrainedExample) {
  const FiniteJoint p(Matrix{{0.4, 0.1}, {0.2, 0.3}});
  // Ratios 1.333.., 0.5, 0.666.., 1.5 are pairwise distinct.
  EXPECT_TRUE(IsFineGrained(p));
  EXPECT_TRUE(IsStrictlyCorrelated(p));
}

TEST(Classifiers, StrictlyCorrelatedNeedsSquare) {
  const FiniteJoint p(Matrix{{0.2, 0.1, 0.2}, {0.1, 0.2, 0.2}});
  EXPECT_THROW(IsStrictlyCorrelated(p), InvalidInput);
}

TEST(Sampling, Deterministic) {
  Rng a = MakeRng(5), b = MakeRng(5);
  const FiniteReports ra = SampleTasks(GradingJoint(), 500, a);
  const FiniteReports rb = SampleTasks(GradingJoint(), 500, b);
  EXPECT_EQ(ra.x, rb.x);
  EXPECT_EQ(ra.y, rb.y);
  Rng c = MakeRng(5), d = MakeRng(5);
  EXPECT_EQ(SampleTasks(GaussianJoint(0, 1, 4), 50, c).x, SampleTasks(GaussianJoint(0, 1, 4), 50, d).x);
}

TEST(Sampling, FiniteFrequencies) {
  Rng rng = MakeRng(DeriveSeed(8, 0));
  const FiniteJoint p = GradingJoint();
  const std::size_t m = 100000;
  const FiniteReports r = SampleTasks(p, m, rng);
  Matrix counts(3, 3);
  for (std::size_t s = 0; s < m; ++s) counts(r.x[s], r.y[s]) += 1.0;
  for (std::size_t c = 0; c < 9; ++c) EXPECT_NEAR(counts.flat()[c] / m, p.matrix().flat()[c], 0.01);
}

TEST(Sampling, GaussianCovariance) {
  Rng rng = MakeRng(DeriveSeed(8, 1));
  const GaussianJoint g(1.0, 1.0, 4.0);
  const std::size_t m = 100000;
  const RealReports r = SampleTasks(g, m, rng);
  double mx = 0, my = 0;
  for (std::size_t s = 0; s < m; ++s) { mx += r.x[s]; my += r.y[s]; }
  mx /= m; my /= m;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t s = 0; s < m; ++s) {
    sxx += (r.x[s] - mx) * (r.x[s] - mx);
    syy += (r.y[s] - my) * (r.y[s] - my);
    sxy += (r.x[s] - mx) * (r.y[s] - my);
  }
  EXPECT_NEAR(sxx / m, 5.0, 0.25);
  EXPECT_NEAR(syy / m, 5.0, 0.25);
  EXPECT_NEAR(sxy / m, 1.0, 0.05 * 5.0);
  EXPECT_NEAR(mx, 1.0, 0.05);
}

TEST(Sampling, DawidSkeneShapesAndAccuracy) {
  Matrix good{{0.9, 0.1}, {0.1, 0.9}}, noise{{0.5, 0.5}, {0.5, 0.5}};
  const DawidSkeneModel model(FiniteDistribution({0.5, 0.5}), {good, good, noise});
  Rng rng = MakeRng(DeriveSeed(8, 2));
  const CrowdSample s = SampleTasks(model, 20000, rng);
  ASSERT_EQ(s.reports.size(), 3u);
  ASSERT_EQ(s.labels.size(), 20000u);
  double agree = 0;
  for (std::size_t t = 0; t < s.labels.size(); ++t) agree += s.reports[0][t] == s.labels[t];
  EXPECT_NEAR(agree / 20000, 0.9, 0.01);
  const FiniteJoint j = model.SignalLabelJoint(0);
  EXPECT_NEAR(j(0, 0), 0.45, 1e-15);
  EXPECT_NEAR(j(1, 0), 0.05, 1e-15);
}

TEST(Pushforward, Examples) {
  const FiniteJoint p = GradingJoint();
  EXPECT_LE(MaxAbsDiff(Pushforward(p, TruthProfile(3, 3)).matrix(), p.matrix()), 1e-15);
  const std::vector<int> swap{2, 1, 0};
  const StrategyProfile sw{Permutation(swap), Permutation(swap)};
  EXPECT_LE(MaxAbsDiff(Pushforward(p, sw).matrix(), p.matrix()), 1e-15);
  const StrategyProfile ob{Oblivious(FiniteDistribution::Uniform(3), 3), Oblivious(FiniteDistribution::Uniform(3), 3)};
  const FiniteJoint pushed = Pushforward(p, ob);
  for (double v : pushed.matrix().flat()) EXPECT_NEAR(v, 1.0 / 9.0, 1e-15);
}

TEST(Pushforward, DimensionMismatch) {
  EXPECT_THROW(Pushforward(GradingJoint(), TruthProfile(2, 3)), InvalidInput);
}

TEST(Pushforward, MatchesOracleAndComposes) {
  Rng rng = MakeRng(DeriveSeed(9, 0));
  const auto kl = ConvexGenerator::Catalog("kl");
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + i % 4;
    const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
    const StrategyProfile t1 = RandomProfile(n, rng), t2 = RandomProfile(n, rng);
    const FiniteJoint once = Pushforward(p, t2);
    EXPECT_NEAR(once.matrix().Sum(), 1.0, 1e-12);
    for (double v : once.matrix().flat()) EXPECT_GE(v, 0.0);
    // Applying t2 then t1 equals applying the composed kernels.
    const StrategyProfile composed{Compose(t2.alice, t1.alice), Compose(t2.bob, t1.bob)};
    EXPECT_LE(MaxAbsDiff(Pushforward(once, t1).matrix(), Pushforward(p, composed).matrix()), 1e-12);
    EXPECT_LE(MutualInformation(kl, once), MutualInformation(kl, p) + 1e-9);
  }
}

TEST(Pushforward, DataProcessingAllGenerators) {
  Rng rng = MakeRng(DeriveSeed(9, 1));
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 2 + i % 4;
    const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
    const FiniteJoint q = Pushforward(p, RandomProfile(n, rng));
    const ConvexGenerator gen = ConvexGenerator::All()[i % 4];
    EXPECT_LE(MutualInformation(gen, q), MutualInformation(gen, p) + 1e-9);
  }
}

TEST(RandomJoint, FullSupportAndSeeded) {
  Rng a = MakeRng(1), b = MakeRng(1);
  const FiniteJoint p = RandomFullSupportJoint(4, 3, a);
  EXPECT_TRUE(p.full_support());
  EXPECT_EQ(p.matrix(), RandomFullSupportJoint(4, 3, b).matrix());
}

}  // namespace
}  // namespace phimech
