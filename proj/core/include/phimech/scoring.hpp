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
#include <cstddef>
#include <variant>

#include "phimech/divergence.hpp"
#include "phimech/joint.hpp"
#include "phimech/linalg.hpp"
#include "phimech/random.hpp"

namespace phimech {

// k[x][y] over finite report spaces.
struct Tabular {
  Matrix k;

  double operator()(std::size_t x, std::size_t y) const { return k(x, y); }
};

// k(x, y) = cxx x^2 + cyy y^2 + cxy x y + cx x + cy y + c0.
struct Quadratic {
  double cxx = 0.0;
  double cyy = 0.0;
  double cxy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double c0 = 0.0;

  double operator()(double x, double y) const {
    return cxx * x * x + cyy * y * y + cxy * x * y + cx * x + cy * y + c0;
  }
  std::array<double, 6> coefficients() const { return {cxx, cyy, cxy, cx, cy, c0}; }
  static Quadratic FromCoefficients(const std::array<double, 6>& c) {
    return {c[0], c[1], c[2], c[3], c[4], c[5]};
  }
};

// k = hi when (v - center)^T form (v - center) <= threshold, lo otherwise.
// `form` is any symmetric 2x2 matrix; it need not be definite, so the region
// can be a hyperbolic band as well as an ellipse.
struct EllipseThreshold {
  Matrix form{{1.0, 0.0}, {0.0, 1.0}};
  double center_x = 0.0;
  double center_y = 0.0;
  double threshold = 1.0;
  double hi = 0.5;
  double lo = -0.5;

  double Form(double x, double y) const;
  bool Inside(double x, double y) const { return Form(x, y) <= threshold; }
  double operator()(double x, double y) const { return Inside(x, y) ? hi : lo; }
};

using ScoringFunction = std::variant<Tabular, Quadratic, EllipseThreshold>;

// Throws InvalidInput for a Tabular lookup with non-integral or out-of-range
// indices.
double Evaluate(const ScoringFunction& k, double x, double y);

// Midpoint subgradient of the ratio on every cell. Cells whose product
// marginal is zero (possible only for degenerate joints) get 0.
Tabular IdealFinite(const ConvexGenerator& gen, const FiniteJoint& joint);

// kl: 1 + log ratio as a Quadratic. total_variation: +-1/2 on the region
// {ratio >= 1}. Other generators throw Unsupported.
ScoringFunction IdealGaussian(const ConvexGenerator& gen, const GaussianJoint& g);

// Throws DomainError if a Tabular cell or an EllipseThreshold level lies
// outside the conjugate domain. Quadratic scores are checked when evaluated.
void ValidateRange(const ConvexGenerator& gen, const ScoringFunction& k);

// Projects onto the conjugate domain; an open end is approached to within
// kOpenDomainMargin. A Quadratic passes through unchanged when the domain is
// the whole line and is rejected (Unsupported) otherwise.
inline constexpr double kOpenDomainMargin = 1e-9;
double ClampToDomain(const ConvexGenerator& gen, double b);
ScoringFunction ClampToDomain(const ConvexGenerator& gen, const ScoringFunction& k);

// Entries uniform on the conjugate domain intersected with [-3, 3], keeping
// kOpenDomainMargin away from an open end. Used to fuzz payment bounds.
Tabular RandomTabular(const ConvexGenerator& gen, std::size_t nx, std::size_t ny, Rng& rng);

// E_P[k] - E_{P_X P_Y}[Phi*(k)].
double VariationalValue(const ConvexGenerator& gen, const Tabular& k, const FiniteJoint& joint);

// Bregman form of the truth-telling shortfall,
//   sum p_X p_Y [Phi*(k) - Phi*(k*) - ratio (k - k*)],  k* = IdealFinite.
// total_variation is rejected (InvalidInput) since Phi is not strictly convex.
double BregmanGap(const ConvexGenerator& gen, const Tabular& k, const FiniteJoint& joint);

// Expectation estimate with its standard error (0 for exact evaluations).
struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

// Gaussian variational value E_P[k] - E_{P_X P_Y}[Phi*(k)]. The kl/Quadratic
// pair is evaluated in closed form (and is -inf when E[exp k] diverges);
// everything else by `draws` Monte Carlo samples from each measure.
Estimate VariationalValue(const ConvexGenerator& gen, const ScoringFunction& k,
                          const GaussianJoint& g, std::size_t draws, Rng& rng);

}  // namespace phimech
