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

#include "phimech/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phimech/errors.hpp"

namespace phimech {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Slack on the closed ends of a bounded conjugate domain, so that values
// produced by arithmetic on +-1/2 are not rejected for a rounding error.
constexpr double kDomainSlack = 1e-12;
// exp(-41) < 2e-18: the kl penalty of a zero-ratio cell is negligible.
constexpr double kKlScoreFloor = -40.0;
// b / (1 - b) at -1e15 is -1 + 1e-15.
constexpr double kHellingerScoreFloor = -1e15;

double Xlogx(double a) { return a == 0.0 ? 0.0 : a * std::log(a); }

}  // namespace

bool Interval::Contains(double b) const {
  if (std::isnan(b)) return false;
  const bool above_lo = lo_closed ? b >= lo - kDomainSlack : b > lo;
  const bool below_hi = hi_closed ? b <= hi + kDomainSlack : b < hi;
  return above_lo && below_hi;
}

ConvexGenerator ConvexGenerator::Catalog(std::string_view name) {
  if (name == "total_variation" || name == "tv")
    return ConvexGenerator(GeneratorKind::kTotalVariation);
  if (name == "kl") return ConvexGenerator(GeneratorKind::kKl);
  if (name == "chi_squared" || name == "chi2")
    return ConvexGenerator(GeneratorKind::kChiSquared);
  if (name == "squared_hellinger" || name == "hellinger")
    return ConvexGenerator(GeneratorKind::kSquaredHellinger);
  throw InvalidInput("unknown convex generator '" + std::string(name) + "'");
}

std::array<ConvexGenerator, 4> ConvexGenerator::All() {
  return {ConvexGenerator(GeneratorKind::kTotalVariation), ConvexGenerator(GeneratorKind::kKl),
          ConvexGenerator(GeneratorKind::kChiSquared),
          ConvexGenerator(GeneratorKind::kSquaredHellinger)};
}

std::string_view ConvexGenerator::name() const {
  switch (kind_) {
    case GeneratorKind::kTotalVariation: return "total_variation";
    case GeneratorKind::kKl: return "kl";
    case GeneratorKind::kChiSquared: return "chi_squared";
    case GeneratorKind::kSquaredHellinger: return "squared_hellinger";
  }
  return "";
}

double ConvexGenerator::Phi(double a) const {
  if (!(a >= 0.0)) throw DomainError("Phi: argument must be nonnegative");
  switch (kind_) {
    case GeneratorKind::kTotalVariation: return 0.5 * std::abs(a - 1.0);
    case GeneratorKind::kKl: return Xlogx(a);
    case GeneratorKind::kChiSquared: return a * a - 1.0;
    case GeneratorKind::kSquaredHellinger: {
      const double d = 1.0 - std::sqrt(a);
      return d * d;
    }
  }
  return 0.0;
}

Interval ConvexGenerator::ConjugateDomain() const {
  switch (kind_) {
    case GeneratorKind::kTotalVariation: return Interval::Closed(-0.5, 0.5);
    case GeneratorKind::kKl:
    case GeneratorKind::kChiSquared: return Interval{};
    case GeneratorKind::kSquaredHellinger: return Interval{-kInf, 1.0, false, false};
  }
  return Interval{};
}

double ConvexGenerator::PhiStar(double b) const {
  if (!InConjugateDomain(b))
    throw DomainError("Phi* of " + std::string(name()) + " undefined at " + std::to_string(b));
  switch (kind_) {
    case GeneratorKind::kTotalVariation: return b;
    case GeneratorKind::kKl: return std::exp(b - 1.0);
    case GeneratorKind::kChiSquared: return 0.25 * b * b + 1.0;
    case GeneratorKind::kSquaredHellinger: return b / (1.0 - b);
  }
  return 0.0;
}

double ConvexGenerator::PhiStarDerivative(double b) const {
  if (!InConjugateDomain(b))
    throw DomainError("Phi*' of " + std::string(name()) + " undefined at " + std::to_string(b));
  switch (kind_) {
    case GeneratorKind::kTotalVariation: return 1.0;
    case GeneratorKind::kKl: return std::exp(b - 1.0);
    case GeneratorKind::kChiSquared: return 0.5 * b;
    case GeneratorKind::kSquaredHellinger: {
      const double d = 1.0 - b;
      return 1.0 / (d * d);
    }
  }
  return 0.0;
}

Interval ConvexGenerator::Subgradient(double a) const {
  if (!(a >= 0.0)) throw DomainError("subgradient: argument must be nonnegative");
  switch (kind_) {
    case GeneratorKind::kTotalVariation:
      // Ratios such as 0.08 / (0.4 * 0.2) land an ulp away from 1, so the kink
      // is widened by kKinkTol to keep uninformative cells at the midpoint.
      if (a > 1.0 + kKinkTol) return Interval::Point(0.5);
      if (a < 1.0 - kKinkTol) return Interval::Point(-0.5);
      return Interval::Closed(-0.5, 0.5);
    case GeneratorKind::kKl:
      if (a == 0.0) return Interval{-kInf, -kInf, false, false};
      return Interval::Point(1.0 + std::log(a));
    case GeneratorKind::kChiSquared: return Interval::Point(2.0 * a);
    case GeneratorKind::kSquaredHellinger:
      if (a == 0.0) return Interval{-kInf, -kInf, false, false};
      return Interval::Point(1.0 - 1.0 / std::sqrt(a));
  }
  return Interval{};
}

double ConvexGenerator::Score(double a) const {
  const Interval g = Subgradient(a);
  if (g.lo == -kInf && g.hi == -kInf)
    return kind_ == GeneratorKind::kKl ? kKlScoreFloor : kHellingerScoreFloor;
  return g.Midpoint();
}

double ConvexGenerator::LipschitzConstant(double lo, double hi) const {
  if (!(lo > 0.0) || !(hi >= lo)) throw InvalidInput("LipschitzConstant: need 0 < lo <= hi");
  switch (kind_) {
    case GeneratorKind::kTotalVariation: return 0.5;
    case GeneratorKind::kKl:
      return std::max(std::abs(1.0 + std::log(lo)), std::abs(1.0 + std::log(hi)));
    case GeneratorKind::kChiSquared: return 2.0 * hi;
    case GeneratorKind::kSquaredHellinger:
      return std::max(std::abs(1.0 - 1.0 / std::sqrt(lo)), std::abs(1.0 - 1.0 / std::sqrt(hi)));
  }
  return 0.0;
}

double Divergence(const ConvexGenerator& gen, const FiniteDistribution& p,
                  const FiniteDistribution& q) {
  if (p.size() != q.size()) throw InvalidInput("Divergence: outcome sets differ");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] == 0.0) {
      if (p[i] > 0.0)
        throw AbsoluteContinuityError("Divergence: p > 0 where q = 0 at outcome " +
                                      std::to_string(i));
      continue;
    }
    total += q[i] * gen.Phi(p[i] / q[i]);
  }
  return total;
}

double VariationalValue(const ConvexGenerator& gen, std::span<const double> k,
                        const FiniteDistribution& p, const FiniteDistribution& q) {
  if (p.size() != q.size() || k.size() != p.size())
    throw InvalidInput("VariationalValue: outcome sets differ");
  double reward = 0.0;
  double penalty = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double conj = gen.PhiStar(k[i]);  // validates the range everywhere
    if (p[i] != 0.0) reward += p[i] * k[i];
    if (q[i] != 0.0) penalty += q[i] * conj;
  }
  return reward - penalty;
}

double MutualInformation(const ConvexGenerator& gen, const FiniteJoint& joint) {
  return Divergence(gen, FiniteDistribution::FromMatrix(joint.matrix()),
                    FiniteDistribution::FromMatrix(joint.ProductOfMarginals()));
}

double MutualInformation(const ConvexGenerator& gen, const GaussianJoint& joint) {
  if (gen.kind() != GeneratorKind::kKl)
    throw Unsupported("Gaussian mutual information has a closed form for kl only");
  const double rho = joint.correlation();
  return -0.5 * std::log1p(-rho * rho);
}

}  // namespace phimech
