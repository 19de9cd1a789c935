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

#include <array>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include "phimech/joint.hpp"
#include "phimech/linalg.hpp"

namespace phimech {

// Interval of the extended real line. Infinite ends are always open.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval Point(double v) { return {v, v, true, true}; }
  static Interval Closed(double lo, double hi) { return {lo, hi, true, true}; }

  bool Contains(double b) const;
  bool bounded_below() const { return lo > -std::numeric_limits<double>::infinity(); }
  bool bounded_above() const { return hi < std::numeric_limits<double>::infinity(); }
  double Midpoint() const { return lo == hi ? lo : 0.5 * (lo + hi); }
};

// Distance from 1 within which the total-variation generator reports its kink.
inline constexpr double kKinkTol = 1e-12;

enum class GeneratorKind { kTotalVariation, kKl, kChiSquared, kSquaredHellinger };

// A convex Phi: [0, inf) -> R with Phi(1) = 0, together with its convex
// conjugate Phi*, subgradient and the domain of Phi*.
//
// The catalog is closed: adding a divergence means adding a GeneratorKind and
// one case to every switch in divergence.cpp. Everything downstream (scoring,
// mechanism, learning) is written against this interface only.
class ConvexGenerator {
 public:
  explicit ConvexGenerator(GeneratorKind kind) : kind_(kind) {}

  // Accepts canonical names (total_variation, kl, chi_squared,
  // squared_hellinger) and the short aliases tv, chi2, hellinger.
  static ConvexGenerator Catalog(std::string_view name);
  static std::array<ConvexGenerator, 4> All();

  GeneratorKind kind() const { return kind_; }
  std::string_view name() const;

  double Phi(double a) const;
  // Throws DomainError outside ConjugateDomain().
  double PhiStar(double b) const;
  // d/db Phi*(b); equals the ratio at which b is the subgradient.
  double PhiStarDerivative(double b) const;
  Interval Subgradient(double a) const;
  Interval ConjugateDomain() const;
  bool InConjugateDomain(double b) const { return ConjugateDomain().Contains(b); }

  // Subgradient selection used for ideal scores: the interval midpoint, with
  // the unbounded limit at a = 0 (kl, squared Hellinger) replaced by a finite
  // floor whose conjugate value is within 1e-15 of its infimum.
  double Score(double a) const;

  // Phi is strictly convex and differentiable on (0, inf).
  bool strictly_convex() const { return kind_ != GeneratorKind::kTotalVariation; }

  // Smallest c with |Phi(z) - Phi(w)| <= c |z - w| on [lo, hi], lo > 0.
  double LipschitzConstant(double lo, double hi) const;

  friend bool operator==(const ConvexGenerator&, const ConvexGenerator&) = default;

 private:
  GeneratorKind kind_;
};

// Sum_w q(w) Phi(p(w)/q(w)) in nats. Cells with p = q = 0 contribute nothing;
// p > 0 with q = 0 throws AbsoluteContinuityError.
double Divergence(const ConvexGenerator& gen, const FiniteDistribution& p,
                  const FiniteDistribution& q);

// E_p[k] - E_q[Phi*(k)]. Every k(w) must lie in the conjugate domain.
double VariationalValue(const ConvexGenerator& gen, std::span<const double> k,
                        const FiniteDistribution& p, const FiniteDistribution& q);

// Phi-divergence of the joint from the product of its marginals.
double MutualInformation(const ConvexGenerator& gen, const FiniteJoint& joint);
// Closed form -1/2 log(1 - rho^2); kl only (Unsupported otherwise).
double MutualInformation(const ConvexGenerator& gen, const GaussianJoint& joint);

}  // namespace phimech
