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

#include "phimech/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "phimech/errors.hpp"

namespace phimech {

RealMap RealMap::Clamp(double lo, double hi) {
  if (!(lo <= hi)) throw InvalidInput("RealMap::Clamp: need lo <= hi");
  return {Kind::kClamp, lo, hi};
}

double RealMap::operator()(double v) const {
  switch (kind) {
    case Kind::kIdentity: return v;
    case Kind::kAffine: return first * v + second;
    case Kind::kClamp: return std::clamp(v, first, second);
    case Kind::kConstant: return first;
  }
  return v;
}

Strategy::Strategy(Matrix theta) {
  if (theta.rows() == 0 || theta.cols() == 0) throw InvalidInput("Strategy: empty matrix");
  for (std::size_t r = 0; r < theta.rows(); ++r) {
    double s = 0.0;
    for (double v : theta.row(r)) {
      if (!(v >= 0.0)) throw InvalidInput("Strategy: negative transition probability");
      s += v;
    }
    if (std::abs(s - 1.0) > kNormalizationTol)
      throw InvalidInput("Strategy: row does not sum to 1");
  }
  rep_ = std::move(theta);
}

const Matrix& Strategy::matrix() const {
  if (const auto* m = std::get_if<Matrix>(&rep_)) return *m;
  throw InvalidInput("Strategy: real-valued map has no transition matrix");
}

const RealMap& Strategy::map() const {
  if (const auto* m = std::get_if<RealMap>(&rep_)) return *m;
  throw InvalidInput("Strategy: finite strategy has no real map");
}

Strategy TruthTelling(std::size_t n) {
  if (n < 2) throw InvalidInput("TruthTelling: need at least two signals");
  return Strategy(Matrix::Identity(n));
}

Strategy Permutation(std::span<const int> perm) {
  const std::size_t n = perm.size();
  std::vector<bool> hit(n, false);
  Matrix m(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    const int r = perm[x];
    if (r < 0 || static_cast<std::size_t>(r) >= n || hit[r])
      throw InvalidInput("Permutation: not a bijection");
    hit[r] = true;
    m(x, r) = 1.0;
  }
  return Strategy(std::move(m));
}

Strategy Oblivious(const FiniteDistribution& dist, std::size_t n_signals) {
  Matrix m(n_signals, dist.size());
  for (std::size_t x = 0; x < n_signals; ++x)
    std::copy(dist.weights().begin(), dist.weights().end(), m.row(x).begin());
  return Strategy(std::move(m));
}

Strategy RandomStrategy(std::size_t n_signals, std::size_t n_reports, Rng& rng) {
  Matrix m(n_signals, n_reports);
  for (std::size_t x = 0; x < n_signals; ++x) {
    const auto row = SampleSimplex(n_reports, rng);
    std::copy(row.begin(), row.end(), m.row(x).begin());
  }
  return Strategy(std::move(m));
}

Strategy RandomPermutation(std::size_t n, Rng& rng) {
  std::vector<int> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  return Permutation(perm);
}

Strategy RandomOblivious(std::size_t n_signals, std::size_t n_reports, Rng& rng) {
  return Oblivious(FiniteDistribution(SampleSimplex(n_reports, rng)), n_signals);
}

StrategyProfile TruthProfile(std::size_t nx, std::size_t ny) {
  return {TruthTelling(nx), TruthTelling(ny)};
}

StrategyProfile RealTruthProfile() {
  return {Strategy(RealMap::Identity()), Strategy(RealMap::Identity())};
}

StrategyProfile RandomProfile(std::size_t n, Rng& rng) {
  if (n < 2) throw InvalidInput("RandomProfile: need at least two signals");
  Strategy a = RandomStrategy(n, n, rng);
  Strategy b = RandomStrategy(n, n, rng);
  return {std::move(a), std::move(b)};
}

Strategy Compose(const Strategy& first, const Strategy& second) {
  if (first.is_finite() != second.is_finite())
    throw InvalidInput("Compose: cannot mix finite and real strategies");
  if (!first.is_finite()) {
    if (first.map().kind == RealMap::Kind::kIdentity) return second;
    if (second.map().kind == RealMap::Kind::kIdentity) return first;
    if (first.map().kind == RealMap::Kind::kAffine && second.map().kind == RealMap::Kind::kAffine) {
      const RealMap f = first.map(), g = second.map();
      return Strategy(RealMap::Affine(g.first * f.first, g.first * f.second + g.second));
    }
    throw Unsupported("Compose: only identity and affine real maps compose symbolically");
  }
  // Renormalize to absorb rounding drift from the product.
  Matrix m = first.matrix() * second.matrix();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double s = 0.0;
    for (double v : m.row(r)) s += v;
    for (double& v : m.row(r)) v /= s;
  }
  return Strategy(std::move(m));
}

bool IsPermutation(const Strategy& s, double tol) {
  if (!s.is_finite()) {
    const RealMap& m = s.map();
    return m.kind == RealMap::Kind::kIdentity || (m.kind == RealMap::Kind::kAffine && m.first != 0.0);
  }
  const Matrix& m = s.matrix();
  if (m.rows() != m.cols()) return false;
  std::vector<bool> hit(m.cols(), false);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::size_t ones = 0, target = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (std::abs(m(r, c) - 1.0) <= tol) {
        ++ones;
        target = c;
      } else if (std::abs(m(r, c)) > tol) {
        return false;
      }
    }
    if (ones != 1 || hit[target]) return false;
    hit[target] = true;
  }
  return true;
}

bool IsOblivious(const Strategy& s, double tol) {
  if (!s.is_finite()) {
    const RealMap& m = s.map();
    return m.kind == RealMap::Kind::kConstant || (m.kind == RealMap::Kind::kAffine && m.first == 0.0);
  }
  const Matrix& m = s.matrix();
  for (std::size_t r = 1; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (std::abs(m(r, c) - m(0, c)) > tol) return false;
  return true;
}

bool IsPermutationProfile(const StrategyProfile& p, double tol) {
  return IsPermutation(p.alice, tol) && IsPermutation(p.bob, tol);
}

bool IsObliviousProfile(const StrategyProfile& p, double tol) {
  return IsOblivious(p.alice, tol) || IsOblivious(p.bob, tol);
}

namespace {

std::vector<std::vector<double>> RowCdfs(const Matrix& m) {
  std::vector<std::vector<double>> cdfs;
  cdfs.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) cdfs.push_back(CumulativeSums(m.row(r)));
  return cdfs;
}

}  // namespace

FiniteReports Apply(const StrategyProfile& profile, const FiniteReports& signals, Rng& rng) {
  signals.Validate();
  const Matrix& a = profile.alice.matrix();
  const Matrix& b = profile.bob.matrix();
  if (a.rows() != signals.nx || b.rows() != signals.ny)
    throw InvalidInput("Apply: strategy dimensions do not match the signal spaces");
  const auto cdf_a = RowCdfs(a);
  const auto cdf_b = RowCdfs(b);
  FiniteReports out{a.cols(), b.cols(), {}, {}};
  out.x.resize(signals.size());
  out.y.resize(signals.size());
  for (std::size_t s = 0; s < signals.size(); ++s) {
    out.x[s] = static_cast<int>(SampleFromCdf(cdf_a[signals.x[s]], Uniform01(rng)));
    out.y[s] = static_cast<int>(SampleFromCdf(cdf_b[signals.y[s]], Uniform01(rng)));
  }
  return out;
}

RealReports Apply(const StrategyProfile& profile, const RealReports& signals) {
  const RealMap& a = profile.alice.map();
  const RealMap& b = profile.bob.map();
  RealReports out;
  out.x.resize(signals.size());
  out.y.resize(signals.size());
  for (std::size_t s = 0; s < signals.size(); ++s) {
    out.x[s] = a(signals.x[s]);
    out.y[s] = b(signals.y[s]);
  }
  return out;
}

}  // namespace phimech
