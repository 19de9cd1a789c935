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

#include "phimech/scoring.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "phimech/errors.hpp"
#include "phimech/priors.hpp"

namespace phimech {
namespace {

const ConvexGenerator kKl = ConvexGenerator::Catalog("kl");
const ConvexGenerator kTv = ConvexGenerator::Catalog("total_variation");
const ConvexGenerator kChi = ConvexGenerator::Catalog("chi_squared");
const ConvexGenerator kHel = ConvexGenerator::Catalog("squared_hellinger");

TEST(IdealFinite, KlOnGradingPrior) {
  const Tabular k = IdealFinite(kKl, GradingJoint());
  EXPECT_NEAR(k(0, 0), 1.2231435513142097, 1e-12);
  EXPECT_NEAR(k(0, 2), 0.7123179275482191, 1e-12);
  EXPECT_NEAR(k(1, 1), 1.0, 1e-12);
}

TEST(IdealFinite, TvOnGradingPrior) {
  const Tabular k = IdealFinite(kTv, GradingJoint());
  const Matrix expected{{0.5, 0.0, -0.5}, {0.0, 0.0, 0.0}, {-0.5, 0.0, 0.5}};
  EXPECT_LE(MaxAbsDiff(k.k, expected), 0.0);
}

TEST(IdealFinite, IndependentPriorIsConstantOne) {
  const FiniteJoint p = IndependentJoint(FiniteDistribution({0.3, 0.7}), FiniteDistribution({0.2, 0.3, 0.5}));
  const Tabular k = IdealFinite(kKl, p);
  for (double v : k.k.flat()) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(IdealFinite, AttainsDivergenceOnRandomPriors) {
  Rng rng = MakeRng(DeriveSeed(21, 0));
  for (int i = 0; i < 100; ++i) {
    const FiniteJoint p = RandomFullSupportJoint(2 + i % 4, 2 + (i / 4) % 4, rng);
    for (const auto& gen : ConvexGenerator::All())
      EXPECT_NEAR(VariationalValue(gen, IdealFinite(gen, p), p), MutualInformation(gen, p), 1e-9);
  }
}

TEST(IdealFinite, KlMonotoneInRatio) {
  Rng rng = MakeRng(DeriveSeed(21, 1));
  for (int i = 0; i < 50; ++i) {
    const FiniteJoint p = RandomFullSupportJoint(3, 4, rng);
    const Matrix r = RatioMatrix(p);
    const Tabular k = IdealFinite(kKl, p);
    for (std::size_t a = 0; a < r.size(); ++a)
      for (std::size_t b = 0; b < r.size(); ++b)
        if (r.flat()[a] < r.flat()[b]) EXPECT_LT(k.k.flat()[a], k.k.flat()[b]);
  }
}

TEST(IdealFinite, ZeroCellsUseFloors) {
  const FiniteJoint p = FiniteJoint(Matrix{{0.5, 0.0}, {0.0, 0.5}});
  const Tabular kl = IdealFinite(kKl, p);
  EXPECT_TRUE(std::isfinite(kl(0, 1)));
  EXPECT_LT(kl(0, 1), kl(0, 0));
  const Tabular tv = IdealFinite(kTv, p);
  EXPECT_EQ(tv(0, 1), -0.5);
  EXPECT_NO_THROW(ValidateRange(kHel, IdealFinite(kHel, p)));
}

TEST(IdealGaussian, KlAtOrigin) {
  const auto k = IdealGaussian(kKl, GaussianJoint(0.0, 1.0, 4.0));
  ASSERT_TRUE(std::holds_alternative<Quadratic>(k));
  EXPECT_NEAR(Evaluate(k, 0.0, 0.0), 1.0 + 0.5 * std::log(25.0 / 24.0), 1e-12);
  EXPECT_NEAR(Evaluate(k, 0.0, 0.0), 1.0204109972601276, 1e-12);
}

TEST(IdealGaussian, KlEqualsOnePlusLogRatio) {
  Rng rng = MakeRng(DeriveSeed(22, 0));
  for (const GaussianJoint g : {GaussianJoint(0.0, 1.0, 4.0), GaussianJoint(2.0, 3.0, 0.7)}) {
    const auto k = IdealGaussian(kKl, g);
    for (int i = 0; i < 100; ++i) {
      const double x = g.m0 + 8 * (Uniform01(rng) - 0.5), y = g.m0 + 8 * (Uniform01(rng) - 0.5);
      EXPECT_NEAR(Evaluate(k, x, y), 1.0 + std::log(oracle::GaussianRatio(x, y, g.m0, g.sigma2, g.tau2)), 1e-9);
    }
  }
}

TEST(IdealGaussian, TvRegionMatchesRatioSign) {
  Rng rng = MakeRng(DeriveSeed(22, 1));
  for (const GaussianJoint g : {GaussianJoint(0.0, 1.0, 4.0), GaussianJoint(-1.0, 2.0, 1.0)}) {
    const auto k = IdealGaussian(kTv, g);
    ASSERT_TRUE(std::holds_alternative<EllipseThreshold>(k));
    int checked = 0;
    while (checked < 100) {
      const double x = g.m0 + 10 * (Uniform01(rng) - 0.5), y = g.m0 + 10 * (Uniform01(rng) - 0.5);
      const double lr = std::log(oracle::GaussianRatio(x, y, g.m0, g.sigma2, g.tau2));
      if (std::abs(lr) < 1e-9) continue;
      EXPECT_EQ(Evaluate(k, x, y) > 0.0, lr > 0.0) << x << "," << y;
      ++checked;
    }
  }
}

TEST(IdealGaussian, OtherGeneratorsUnsupported) {
  EXPECT_THROW(IdealGaussian(kChi, GaussianJoint(0, 1, 1)), Unsupported);
  EXPECT_THROW(IdealGaussian(kHel, GaussianJoint(0, 1, 1)), Unsupported);
}

TEST(Evaluate, Forms) {
  const Tabular t{Matrix{{1.0, 2.0}, {3.0, 4.0}}};
  EXPECT_EQ(Evaluate(t, 1, 0), 3.0);
  EXPECT_THROW(Evaluate(t, 2, 0), InvalidInput);
  EXPECT_THROW(Evaluate(t, 0.5, 0), InvalidInput);
  EXPECT_THROW(Evaluate(t, -1, 0), InvalidInput);
  Quadratic q;
  q.c0 = 3.0;
  EXPECT_EQ(Evaluate(q, 17.0, -4.0), 3.0);
  const Quadratic full{1, 2, 3, 4, 5, 6};
  EXPECT_EQ(Evaluate(full, 1.0, 2.0), 1 + 8 + 6 + 4 + 10 + 6);
  EllipseThreshold e;
  e.center_x = 2.0;
  e.center_y = -1.0;
  EXPECT_EQ(Evaluate(e, 2.0, -1.0), e.hi);
  EXPECT_EQ(Evaluate(e, 10.0, 10.0), e.lo);
}

TEST(Clamp, Examples) {
  EXPECT_EQ(ClampToDomain(kTv, 0.7), 0.5);
  EXPECT_EQ(ClampToDomain(kTv, -3.0), -0.5);
  EXPECT_EQ(ClampToDomain(kKl, 1e6), 1e6);
  EXPECT_EQ(ClampToDomain(kHel, 1.2), 1.0 - kOpenDomainMargin);
  const Tabular t{Matrix{{0.7, -0.2}, {0.1, -9.0}}};
  const auto c = std::get<Tabular>(ClampToDomain(kTv, ScoringFunction(t)));
  EXPECT_EQ(c.k, (Matrix{{0.5, -0.2}, {0.1, -0.5}}));
  EXPECT_EQ(std::get<Tabular>(ClampToDomain(kKl, ScoringFunction(t))).k, t.k);
  EllipseThreshold e;
  e.hi = 2.0;
  e.lo = -2.0;
  const auto ce = std::get<EllipseThreshold>(ClampToDomain(kTv, ScoringFunction(e)));
  EXPECT_EQ(ce.hi, 0.5);
  EXPECT_EQ(ce.lo, -0.5);
  EXPECT_THROW(ClampToDomain(kTv, ScoringFunction(Quadratic{})), Unsupported);
  EXPECT_NO_THROW(ClampToDomain(kKl, ScoringFunction(Quadratic{})));
}

TEST(ValidateRange, Rejections) {
  EXPECT_THROW(ValidateRange(kTv, Tabular{Matrix{{0.6}}}), DomainError);
  EXPECT_NO_THROW(ValidateRange(kTv, Tabular{Matrix{{0.5}}}));
  EXPECT_THROW(ValidateRange(kHel, Tabular{Matrix{{1.0}}}), DomainError);
}

TEST(RandomTabular, WithinDomain) {
  Rng rng = MakeRng(3);
  for (const auto& gen : ConvexGenerator::All()) {
    const Tabular k = RandomTabular(gen, 3, 4, rng);
    EXPECT_EQ(k.k.rows(), 3u);
    EXPECT_NO_THROW(ValidateRange(gen, k));
  }
}

TEST(BregmanGap, IdealIsZero) {
  for (const auto& gen : {kKl, kChi, kHel})
    EXPECT_NEAR(BregmanGap(gen, IdealFinite(gen, GradingJoint()), GradingJoint()), 0.0, 1e-12);
}

TEST(BregmanGap, ShiftedKlMatchesDifferenceForm) {
  const FiniteJoint p = GradingJoint();
  Tabular k = IdealFinite(kKl, p);
  for (double& v : k.k.flat()) v += 0.1;
  const double gap = BregmanGap(kKl, k, p);
  EXPECT_NEAR(gap, MutualInformation(kKl, p) - VariationalValue(kKl, k, p), 1e-9);
  // Hand form: sum q * r * (e^0.1 - 1 - 0.1) = e^0.1 - 1.1 because sum q r = 1.
  EXPECT_NEAR(gap, std::exp(0.1) - 1.1, 1e-12);
}

TEST(BregmanGap, RandomPerturbationsNonnegative) {
  Rng rng = MakeRng(DeriveSeed(23, 0));
  for (int i = 0; i < 100; ++i) {
    const FiniteJoint p = RandomFullSupportJoint(3, 3, rng);
    for (const auto& gen : {kKl, kChi, kHel}) {
      Tabular k = IdealFinite(gen, p);
      for (double& v : k.k.flat()) v = ClampToDomain(gen, v + 0.3 * (Uniform01(rng) - 0.5));
      const double gap = BregmanGap(gen, k, p);
      EXPECT_GE(gap, -1e-12);
      EXPECT_NEAR(gap, MutualInformation(gen, p) - VariationalValue(gen, k, p), 1e-9);
    }
  }
}

TEST(BregmanGap, TvRejected) {
  EXPECT_THROW(BregmanGap(kTv, IdealFinite(kTv, GradingJoint()), GradingJoint()), InvalidInput);
}

TEST(GaussianVariational, ClosedFormMatchesQuadrature) {
  const GaussianJoint g(0.5, 1.0, 4.0);
  Rng rng = MakeRng(1);
  const auto ideal = IdealGaussian(kKl, g);
  EXPECT_NEAR(VariationalValue(kKl, ideal, g, 0, rng).value, oracle::kGaussianKlMi, 1e-12);
  // A non-ideal quadratic: the penalty expectation is computed under the product.
  const Quadratic q{-0.01, -0.02, 0.05, 0.01, -0.02, 0.9};
  const double reward = oracle::IntegrateJoint(g.m0, g.sigma2, g.tau2, [&](double x, double y) { return q(x, y); });
  const double penalty = oracle::IntegrateJoint(g.m0, g.sigma2, g.tau2, [&](double x, double y) {
    return std::exp(q(x, y) - 1.0) / oracle::GaussianRatio(x, y, g.m0, g.sigma2, g.tau2);
  });
  EXPECT_NEAR(VariationalValue(kKl, ScoringFunction(q), g, 0, rng).value, reward - penalty, 1e-6);
}

TEST(GaussianVariational, DivergentPenaltyIsMinusInfinity) {
  const Quadratic q{1.0, 1.0, 0.0, 0.0, 0.0, 0.0};
  Rng rng = MakeRng(1);
  EXPECT_EQ(VariationalValue(kKl, ScoringFunction(q), GaussianJoint(0, 1, 4), 0, rng).value,
            -std::numeric_limits<double>::infinity());
}

TEST(GaussianVariational, TvMonteCarlo) {
  const GaussianJoint g(0.0, 1.0, 4.0);
  Rng rng = MakeRng(DeriveSeed(24, 0));
  const Estimate e = VariationalValue(kTv, IdealGaussian(kTv, g), g, 400000, rng);
  // TV mutual information: half the integral of |p - q|, by quadrature.
  const double tv = 0.5 * oracle::IntegrateJoint(g.m0, g.sigma2, g.tau2, [&](double x, double y) {
    return std::abs(1.0 - 1.0 / oracle::GaussianRatio(x, y, 0.0, 1.0, 4.0));
  });
  EXPECT_GT(e.standard_error, 0.0);
  EXPECT_NEAR(e.value, tv, 4 * e.standard_error + 1e-4);
}

}  // namespace
}  // namespace phimech
