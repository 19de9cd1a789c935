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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "phimech/errors.hpp"
#include "phimech/priors.hpp"

namespace phimech {
namespace {

std::size_t TableIndex(double v, std::size_t n) {
  if (!(v >= 0.0) || v != std::floor(v) || v >= static_cast<double>(n))
    throw InvalidInput("Evaluate: report index " + std::to_string(v) + " out of range");
  return static_cast<std::size_t>(v);
}

// Centered form of a quadratic score around (m, m):
//   k(m + u, m + v) = w^T C w + h^T w + k0,  w = (u, v).
struct CenteredQuadratic {
  double c11, c12, c22;  // C, with c12 the off-diagonal entry
  double h1, h2;
  double k0;
};

CenteredQuadratic Center(const Quadratic& q, double m) {
  return {q.cxx,
          0.5 * q.cxy,
          q.cyy,
          q.cx + 2.0 * q.cxx * m + q.cxy * m,
          q.cy + 2.0 * q.cyy * m + q.cxy * m,
          q(m, m)};
}

// Closed-form kl variational value of a quadratic score under the Gaussian
// model. P has covariance [[s, c], [c, s]], the product measure s I.
double KlQuadraticValue(const Quadratic& k, const GaussianJoint& g) {
  const CenteredQuadratic q = Center(k, g.m0);
  const double s = g.variance();
  const double c = g.covariance();
  const double reward = q.c11 * s + 2.0 * q.c12 * c + q.c22 * s + q.k0;

  // E[exp(w^T C w + h^T w)] for w ~ N(0, s I) is
  //   det(I - 2 s C)^(-1/2) exp(1/2 h^T (I/s - 2C)^(-1) h)
  // provided I/s - 2C is positive definite.
  const double a11 = 1.0 / s - 2.0 * q.c11;
  const double a12 = -2.0 * q.c12;
  const double a22 = 1.0 / s - 2.0 * q.c22;
  const double det_a = a11 * a22 - a12 * a12;
  if (!(a11 > 0.0) || !(det_a > 0.0)) return -std::numeric_limits<double>::infinity();
  const double quad = (a22 * q.h1 * q.h1 - 2.0 * a12 * q.h1 * q.h2 + a11 * q.h2 * q.h2) / det_a;
  const double det_i = s * s * det_a;  // det(I - 2 s C)
  const double moment = std::exp(0.5 * quad) / std::sqrt(det_i);
  return reward - std::exp(q.k0 - 1.0) * moment;
}

}  // namespace

double EllipseThreshold::Form(double x, double y) const {
  const double u = x - center_x;
  const double v = y - center_y;
  return form(0, 0) * u * u + (form(0, 1) + form(1, 0)) * u * v + form(1, 1) * v * v;
}

double Evaluate(const ScoringFunction& k, double x, double y) {
  if (const auto* t = std::get_if<Tabular>(&k))
    return (*t)(TableIndex(x, t->k.rows()), TableIndex(y, t->k.cols()));
  if (const auto* q = std::get_if<Quadratic>(&k)) return (*q)(x, y);
  return std::get<EllipseThreshold>(k)(x, y);
}

Tabular IdealFinite(const ConvexGenerator& gen, const FiniteJoint& joint) {
  Tabular out{Matrix(joint.rows(), joint.cols())};
  const auto& px = joint.row_marginal();
  const auto& py = joint.col_marginal();
  for (std::size_t x = 0; x < joint.rows(); ++x)
    for (std::size_t y = 0; y < joint.cols(); ++y) {
      const double q = px[x] * py[y];
      out.k(x, y) = q > 0.0 ? gen.Score(joint(x, y) / q) : 0.0;
    }
  return out;
}

ScoringFunction IdealGaussian(const ConvexGenerator& gen, const GaussianJoint& g) {
  const double s = g.variance();
  const double c = g.covariance();
  const double d = g.covariance_det();
  switch (gen.kind()) {
    case GeneratorKind::kKl: {
      // 1 + log ratio, expanded around the mean.
      const double a = -c * c / (2.0 * d * s);
      const double b = c / d;
      const double m = g.m0;
      Quadratic q;
      q.cxx = a;
      q.cyy = a;
      q.cxy = b;
      q.cx = -2.0 * a * m - b * m;
      q.cy = q.cx;
      q.c0 = 1.0 + std::log(s / std::sqrt(d)) + (2.0 * a + b) * m * m;
      return q;
    }
    case GeneratorKind::kTotalVariation: {
      // log ratio >= 0 after multiplying through by 2 D s > 0.
      EllipseThreshold e;
      e.form = Matrix{{c * c, -c * s}, {-c * s, c * c}};
      e.center_x = g.m0;
      e.center_y = g.m0;
      e.threshold = d * s * std::log(s * s / d);
      e.hi = 0.5;
      e.lo = -0.5;
      return e;
    }
    default:
      throw Unsupported("no Gaussian ideal scoring function for " + std::string(gen.name()));
  }
}

void ValidateRange(const ConvexGenerator& gen, const ScoringFunction& k) {
  auto check = [&](double v) {
    if (!gen.InConjugateDomain(v))
      throw DomainError("score " + std::to_string(v) + " outside the conjugate domain of " +
                        std::string(gen.name()));
  };
  if (const auto* t = std::get_if<Tabular>(&k)) {
    for (double v : t->k.flat()) check(v);
  } else if (const auto* e = std::get_if<EllipseThreshold>(&k)) {
    check(e->hi);
    check(e->lo);
  }
}

double ClampToDomain(const ConvexGenerator& gen, double b) {
  if (std::isnan(b)) throw DomainError("ClampToDomain: NaN score");
  const Interval dom = gen.ConjugateDomain();
  if (dom.bounded_below() && b < dom.lo) b = dom.lo_closed ? dom.lo : dom.lo + kOpenDomainMargin;
  if (dom.bounded_above() && b > dom.hi) b = dom.hi_closed ? dom.hi : dom.hi - kOpenDomainMargin;
  if (!dom.hi_closed && dom.bounded_above() && b > dom.hi - kOpenDomainMargin)
    b = dom.hi - kOpenDomainMargin;
  return b;
}

ScoringFunction ClampToDomain(const ConvexGenerator& gen, const ScoringFunction& k) {
  if (const auto* t = std::get_if<Tabular>(&k)) {
    Tabular out = *t;
    for (double& v : out.k.flat()) v = ClampToDomain(gen, v);
    return out;
  }
  if (const auto* e = std::get_if<EllipseThreshold>(&k)) {
    EllipseThreshold out = *e;
    out.hi = ClampToDomain(gen, out.hi);
    out.lo = ClampToDomain(gen, out.lo);
    return out;
  }
  const Interval dom = gen.ConjugateDomain();
  if (dom.bounded_below() || dom.bounded_above())
    throw Unsupported("a quadratic score cannot be confined to the bounded conjugate domain of " +
                      std::string(gen.name()));
  return k;
}

Tabular RandomTabular(const ConvexGenerator& gen, std::size_t nx, std::size_t ny, Rng& rng) {
  const Interval dom = gen.ConjugateDomain();
  const double lo = std::max(-3.0, dom.lo_closed ? dom.lo : dom.lo + kOpenDomainMargin);
  const double hi = std::min(3.0, dom.hi_closed ? dom.hi : dom.hi - kOpenDomainMargin);
  std::uniform_real_distribution<double> u(lo, hi);
  Tabular t{Matrix(nx, ny)};
  for (double& v : t.k.flat()) v = u(rng);
  return t;
}

double VariationalValue(const ConvexGenerator& gen, const Tabular& k, const FiniteJoint& joint) {
  if (k.k.rows() != joint.rows() || k.k.cols() != joint.cols())
    throw InvalidInput("VariationalValue: score table does not match the joint");
  return VariationalValue(gen, k.k.flat(), FiniteDistribution::FromMatrix(joint.matrix()),
                          FiniteDistribution::FromMatrix(joint.ProductOfMarginals()));
}

double BregmanGap(const ConvexGenerator& gen, const Tabular& k, const FiniteJoint& joint) {
  if (!gen.strictly_convex())
    throw InvalidInput("BregmanGap: generator is not strictly convex; use the difference form");
  if (k.k.rows() != joint.rows() || k.k.cols() != joint.cols())
    throw InvalidInput("BregmanGap: score table does not match the joint");
  const Tabular ideal = IdealFinite(gen, joint);
  const auto& px = joint.row_marginal();
  const auto& py = joint.col_marginal();
  double gap = 0.0;
  for (std::size_t x = 0; x < joint.rows(); ++x)
    for (std::size_t y = 0; y < joint.cols(); ++y) {
      const double q = px[x] * py[y];
      if (q == 0.0) continue;
      const double r = joint(x, y) / q;
      const double kv = k(x, y);
      const double ks = ideal(x, y);
      gap += q * (gen.PhiStar(kv) - gen.PhiStar(ks) - r * (kv - ks));
    }
  return gap;
}

Estimate VariationalValue(const ConvexGenerator& gen, const ScoringFunction& k,
                          const GaussianJoint& g, std::size_t draws, Rng& rng) {
  if (std::holds_alternative<Tabular>(k))
    throw InvalidInput("VariationalValue: a table cannot score real-valued reports");
  if (gen.kind() == GeneratorKind::kKl && std::holds_alternative<Quadratic>(k))
    return {KlQuadraticValue(std::get<Quadratic>(k), g), 0.0};
  if (draws < 2) throw InvalidInput("VariationalValue: need at least two draws");

  const RealReports joint = SampleTasks(g, draws, rng);
  std::normal_distribution<double> marginal(g.m0, std::sqrt(g.variance()));
  double sum_p = 0.0, sum_p2 = 0.0, sum_q = 0.0, sum_q2 = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double kp = Evaluate(k, joint.x[i], joint.y[i]);
    const double x = marginal(rng);
    const double y = marginal(rng);
    const double kq = gen.PhiStar(Evaluate(k, x, y));
    sum_p += kp;
    sum_p2 += kp * kp;
    sum_q += kq;
    sum_q2 += kq * kq;
  }
  const double n = static_cast<double>(draws);
  const double mean_p = sum_p / n;
  const double mean_q = sum_q / n;
  const double var_p = std::max(0.0, (sum_p2 - n * mean_p * mean_p) / (n - 1.0));
  const double var_q = std::max(0.0, (sum_q2 - n * mean_q * mean_q) / (n - 1.0));
  return {mean_p - mean_q, std::sqrt(var_p / n + var_q / n)};
}

}  // namespace phimech
