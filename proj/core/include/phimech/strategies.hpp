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
#include <span>
#include <variant>

#include "phimech/linalg.hpp"
#include "phimech/random.hpp"
#include "phimech/reports.hpp"

namespace phimech {

// Deterministic report map for real-valued signals.
struct RealMap {
  enum class Kind { kIdentity, kAffine, kClamp, kConstant };
  Kind kind = Kind::kIdentity;
  // affine: a, b; clamp: lo, hi; constant: c in `first`.
  double first = 0.0;
  double second = 0.0;

  static RealMap Identity() { return {}; }
  static RealMap Affine(double a, double b) { return {Kind::kAffine, a, b}; }
  static RealMap Clamp(double lo, double hi);
  static RealMap Constant(double c) { return {Kind::kConstant, c, 0.0}; }

  double operator()(double v) const;
};

// A per-task report kernel: either a row-stochastic matrix theta[x][x_hat]
// over finite spaces or a deterministic map on the reals.
class Strategy {
 public:
  // Throws InvalidInput unless theta is row-stochastic within 1e-12.
  explicit Strategy(Matrix theta);
  explicit Strategy(RealMap map) : rep_(map) {}

  bool is_finite() const { return std::holds_alternative<Matrix>(rep_); }
  const Matrix& matrix() const;
  const RealMap& map() const;

  std::size_t n_signals() const { return matrix().rows(); }
  std::size_t n_reports() const { return matrix().cols(); }

 private:
  std::variant<Matrix, RealMap> rep_;
};

struct StrategyProfile {
  Strategy alice;
  Strategy bob;
};

Strategy TruthTelling(std::size_t n);
// perm[x] is the report given signal x. Throws unless perm is a bijection.
Strategy Permutation(std::span<const int> perm);
Strategy Oblivious(const FiniteDistribution& dist, std::size_t n_signals);
// Every row drawn from Dirichlet(1).
Strategy RandomStrategy(std::size_t n_signals, std::size_t n_reports, Rng& rng);

// Uniformly random bijection on n symbols.
Strategy RandomPermutation(std::size_t n, Rng& rng);
// Every row equal to one Dirichlet(1) draw.
Strategy RandomOblivious(std::size_t n_signals, std::size_t n_reports, Rng& rng);

StrategyProfile TruthProfile(std::size_t nx, std::size_t ny);
StrategyProfile RealTruthProfile();
StrategyProfile RandomProfile(std::size_t n, Rng& rng);

// Applying `first` then `second`: (first * second) for matrices.
Strategy Compose(const Strategy& first, const Strategy& second);

// Structural tests. Real maps are classified symbolically: identity and
// affine maps with a != 0 are bijections, constants (or affine with a == 0)
// are oblivious, clamps are neither.
bool IsPermutation(const Strategy& s, double tol = 1e-9);
bool IsOblivious(const Strategy& s, double tol = 1e-9);
bool IsPermutationProfile(const StrategyProfile& p, double tol = 1e-9);
bool IsObliviousProfile(const StrategyProfile& p, double tol = 1e-9);

// Per-task independent draws x_hat ~ theta_A(x, .), y_hat ~ theta_B(y, .).
FiniteReports Apply(const StrategyProfile& profile, const FiniteReports& signals, Rng& rng);
RealReports Apply(const StrategyProfile& profile, const RealReports& signals);

}  // namespace phimech
