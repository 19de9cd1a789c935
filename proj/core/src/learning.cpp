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

#include "phimech/learning.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>
#include <vector>

#include "phimech/priors.hpp"

namespace phimech {
namespace {

using Coeffs = std::array<double, 6>;

std::vector<std::size_t> TaskOrder(std::size_t m, std::uint64_t split_seed) {
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (split_seed != 0) {
    Rng rng = MakeRng(split_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

Tabular ErmTabular(const ConvexGenerator& gen, const FiniteReports& reports,
                   const LearnerConfig& config) {
  const std::size_t n = reports.size() / 3;
  const auto order = TaskOrder(reports.size(), config.split_seed);
  Matrix joint(reports.nx, reports.ny);
  std::vector<double> fx(reports.nx, 0.0), fy(reports.ny, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    joint(reports.x[order[s]], reports.y[order[s]]) += 1.0;
    fx[reports.x[order[n + s]]] += 1.0;
    fy[reports.y[order[2 * n + s]]] += 1.0;
  }
  const double dn = static_cast<double>(n);
  Tabular k{Matrix(reports.nx, reports.ny)};
  for (std::size_t x = 0; x < reports.nx; ++x)
    for (std::size_t y = 0; y < reports.ny; ++y) {
      const double q = (fx[x] / dn) * (fy[y] / dn);
      // argmax_k p k - q Phi*(k) is any subgradient of Phi at p / q.
      k.k(x, y) = q > 0.0 ? gen.Score((joint(x, y) / dn) / q) : 0.0;
    }
  for (double& v : k.k.flat()) v = ClampToDomain(gen, v);
  return k;
}

struct Standardizer {
  double mx = 0.0, sx = 1.0, my = 0.0, sy = 1.0;

  Coeffs Features(double x, double y) const {
    const double u = (x - mx) / sx;
    const double v = (y - my) / sy;
    return {u * u, v * v, u * v, u, v, 1.0};
  }

  // Coefficients on raw (x, y) of the score with standardized coefficients t.
  Quadratic Unstandardize(const Coeffs& t) const {
    const double a = t[0] / (sx * sx);
    const double b = t[1] / (sy * sy);
    const double c = t[2] / (sx * sy);
    const double d = t[3] / sx;
    const double e = t[4] / sy;
    Quadratic q;
    q.cxx = a;
    q.cyy = b;
    q.cxy = c;
    q.cx = -2.0 * a * mx - c * my + d;
    q.cy = -2.0 * b * my - c * mx + e;
    q.c0 = a * mx * mx + b * my * my + c * mx * my - d * mx - e * my + t[5];
    return q;
  }
};

std::pair<double, double> MeanAndSd(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double a : v) ss += (a - mean) * (a - mean);
  const double sd = std::sqrt(ss / n);
  return {mean, sd > 0.0 ? sd : 1.0};
}

// Concave objective J(t) = mean_P <t, f> - mean_Q Phi*(<t, f>) on
// precomputed feature rows. Evaluate() returns the value and gradient from
// one pass over the product sample.
class ErmObjective {
 public:
  ErmObjective(const ConvexGenerator& gen, std::vector<Coeffs> joint, std::vector<Coeffs> product)
      : gen_(gen), joint_(std::move(joint)), product_(std::move(product)) {
    mean_joint_.fill(0.0);
    for (const auto& f : joint_)
      for (std::size_t i = 0; i < 6; ++i) mean_joint_[i] += f[i];
    for (double& v : mean_joint_) v /= static_cast<double>(joint_.size());
  }

  std::pair<double, Coeffs> Evaluate(const Coeffs& t) const {
    double reward = 0.0;
    for (std::size_t i = 0; i < 6; ++i) reward += t[i] * mean_joint_[i];
    Coeffs weighted{};
    double penalty = 0.0;
    for (const auto& f : product_) {
      const double b = Dot(t, f);
      // kl overflows to inf for huge scores; that is reported, not thrown.
      penalty += gen_.PhiStar(b);
      const double w = gen_.PhiStarDerivative(b);
      for (std::size_t i = 0; i < 6; ++i) weighted[i] += w * f[i];
    }
    const double inv = 1.0 / static_cast<double>(product_.size());
    Coeffs g;
    for (std::size_t i = 0; i < 6; ++i) g[i] = mean_joint_[i] - weighted[i] * inv;
    return {reward - penalty * inv, g};
  }

 private:
  static double Dot(const Coeffs& a, const Coeffs& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < 6; ++i) s += a[i] * b[i];
    return s;
  }

  const ConvexGenerator& gen_;
  std::vector<Coeffs> joint_;
  std::vector<Coeffs> product_;
  Coeffs mean_joint_;
};

Coeffs Project(Coeffs t, double bound) {
  for (double& v : t) v = std::clamp(v, -bound, bound);
  return t;
}

double ProjectedGradientNorm(const Coeffs& t, const Coeffs& g, double bound) {
  double norm = 0.0;
  for (std::size_t i = 0; i < 6; ++i)
    norm = std::max(norm, std::abs(std::clamp(t[i] + g[i], -bound, bound) - t[i]));
  return norm;
}

[[noreturn]] void ReportDivergence(std::size_t iter, double step, double value) {
  std::ostringstream msg;
  msg << "ERM objective became non-finite (J = " << value << ") at iteration " << iter
      << " with step " << step;
  throw SolverFailure(msg.str());
}

ErmResult ErmQuadratic(const ConvexGenerator& gen, const RealReports& reports,
                       const LearnerConfig& config) {
  const Interval dom = gen.ConjugateDomain();
  if (dom.bounded_below() || dom.bounded_above())
    throw Unsupported("the quadratic class needs a generator whose conjugate is defined on the "
                      "whole line; " + std::string(gen.name()) + " is not");
  const std::size_t n = reports.size() / 3;
  const auto order = TaskOrder(reports.size(), config.split_seed);

  std::vector<double> xs, ys;
  xs.reserve(3 * n);
  ys.reserve(3 * n);
  for (std::size_t s = 0; s < 3 * n; ++s) {
    xs.push_back(reports.x[order[s]]);
    ys.push_back(reports.y[order[s]]);
  }
  Standardizer st;
  std::tie(st.mx, st.sx) = MeanAndSd(xs);
  std::tie(st.my, st.sy) = MeanAndSd(ys);

  std::vector<Coeffs> joint, product;
  joint.reserve(n);
  product.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    joint.push_back(st.Features(xs[s], ys[s]));
    product.push_back(st.Features(xs[n + s], ys[2 * n + s]));
  }
  const ErmObjective objective(gen, std::move(joint), std::move(product));

  const SolverConfig& sc = config.solver;
  const double bound = sc.coefficient_bound;
  Coeffs t{};
  auto [value, grad] = objective.Evaluate(t);
  if (!std::isfinite(value)) ReportDivergence(0, sc.step_size, value);
  ErmResult result;
  result.initial_objective = value;

  // Each iteration first tries the Barzilai-Borwein step from the last move
  // (the configured step_size on the first iteration) and halves it until J
  // increases. When no step increases J the iterate sits at the rounding
  // floor of the objective and the loop stops.
  constexpr double kMinStep = 1e-14;
  constexpr double kMaxStep = 1e8;
  double step = sc.step_size;
  double pg = ProjectedGradientNorm(t, grad, bound);
  std::size_t iter = 0;
  while (iter < sc.max_iters && pg >= sc.grad_tol) {
    ++iter;
    Coeffs cand = t;
    for (std::size_t i = 0; i < 6; ++i) cand[i] += step * grad[i];
    cand = Project(cand, bound);
    const auto [cand_value, cand_grad] = objective.Evaluate(cand);
    if (std::isnan(cand_value) || cand_value == std::numeric_limits<double>::infinity())
      ReportDivergence(iter, step, cand_value);
    if (!(cand_value > value)) {
      step *= 0.5;
      if (step < kMinStep) break;
      continue;
    }
    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
      const double ds = cand[i] - t[i];
      ss += ds * ds;
      sy -= ds * (cand_grad[i] - grad[i]);
    }
    t = cand;
    value = cand_value;
    grad = cand_grad;
    pg = ProjectedGradientNorm(t, grad, bound);
    step = sy > 0.0 ? std::clamp(ss / sy, kMinStep, kMaxStep) : 2.0 * step;
  }
  result.scorer = st.Unstandardize(t);
  result.final_objective = value;
  result.iterations = iter;
  result.gradient_norm = pg;
  result.converged = pg < sc.grad_tol;
  return result;
}

}  // namespace

void LearnerConfig::Validate() const {
  if (!(solver.step_size > 0.0)) throw InvalidInput("LearnerConfig: step_size must be positive");
  if (solver.max_iters < 1) throw InvalidInput("LearnerConfig: max_iters must be at least 1");
  if (!(solver.coefficient_bound > 0.0))
    throw InvalidInput("LearnerConfig: coefficient bound must be positive");
  if (!(solver.grad_tol > 0.0)) throw InvalidInput("LearnerConfig: grad_tol must be positive");
}

EmpiricalJoint EmpiricalJoint::FromReports(const FiniteReports& reports) {
  reports.Validate();
  if (reports.size() == 0) throw InvalidInput("EmpiricalJoint: no reports");
  EmpiricalJoint e;
  e.samples = reports.size();
  e.counts = Matrix(reports.nx, reports.ny);
  for (std::size_t s = 0; s < reports.size(); ++s) e.counts(reports.x[s], reports.y[s]) += 1.0;
  e.frequencies = e.counts;
  const double m = static_cast<double>(e.samples);
  for (double& v : e.frequencies.flat()) v /= m;
  return e;
}

FiniteReports ReportsWithCounts(const Matrix& counts) {
  FiniteReports r{counts.rows(), counts.cols(), {}, {}};
  for (std::size_t x = 0; x < counts.rows(); ++x)
    for (std::size_t y = 0; y < counts.cols(); ++y) {
      const double c = counts(x, y);
      if (!(c >= 0.0) || c != std::floor(c))
        throw InvalidInput("ReportsWithCounts: counts must be nonnegative integers");
      for (double i = 0; i < c; ++i) {
        r.x.push_back(static_cast<int>(x));
        r.y.push_back(static_cast<int>(y));
      }
    }
  return r;
}

Tabular LearnGenerative(const ConvexGenerator& gen, const FiniteReports& reports) {
  const EmpiricalJoint e = EmpiricalJoint::FromReports(reports);
  Tabular k = IdealFinite(gen, e.AsJoint());
  for (double& v : k.k.flat()) v = ClampToDomain(gen, v);
  return k;
}

ErmResult LearnErm(const ConvexGenerator& gen, const FiniteReports& reports,
                   const LearnerConfig& config) {
  config.Validate();
  reports.Validate();
  if (reports.size() < 3) throw InvalidInput("LearnErm: need at least three reports");
  if (config.function_class != FunctionClass::kTabular)
    throw InvalidInput("LearnErm: finite reports are learned with the tabular class");
  ErmResult r;
  r.scorer = ErmTabular(gen, reports, config);
  r.converged = true;
  return r;
}

ErmResult LearnErm(const ConvexGenerator& gen, const RealReports& reports,
                   const LearnerConfig& config) {
  config.Validate();
  reports.Validate();
  if (reports.size() < 3) throw InvalidInput("LearnErm: need at least three reports");
  if (config.function_class != FunctionClass::kQuadratic)
    throw InvalidInput("LearnErm: real-valued reports are learned with the quadratic class");
  return ErmQuadratic(gen, reports, config);
}

FiniteLearner MakeFiniteLearner(const ConvexGenerator& gen, const LearnerConfig& config) {
  config.Validate();
  if (config.method == LearnerMethod::kGenerative)
    return [gen](const FiniteReports& r) -> ScoringFunction { return LearnGenerative(gen, r); };
  return [gen, config](const FiniteReports& r) { return LearnErm(gen, r, config).scorer; };
}

RealLearner MakeRealLearner(const ConvexGenerator& gen, const LearnerConfig& config) {
  config.Validate();
  if (config.method == LearnerMethod::kGenerative)
    throw Unsupported("the generative learner needs finite reports");
  return [gen, config](const RealReports& r) { return LearnErm(gen, r, config).scorer; };
}

double Accuracy(const ConvexGenerator& gen, const Tabular& k, const FiniteJoint& joint) {
  return MutualInformation(gen, joint) - VariationalValue(gen, k, joint);
}

Estimate Accuracy(const ConvexGenerator& gen, const ScoringFunction& k, const GaussianJoint& g,
                  std::size_t draws, Rng& rng) {
  if (gen.kind() == GeneratorKind::kKl) {
    const Estimate v = VariationalValue(gen, k, g, draws, rng);
    return {MutualInformation(gen, g) - v.value, v.standard_error};
  }
  if (gen.kind() != GeneratorKind::kTotalVariation)
    throw Unsupported("Gaussian accuracy is available for kl and total_variation only");
  ValidateRange(gen, k);
  if (draws < 2) throw InvalidInput("Accuracy: need at least two draws");
  // Phi* is the identity on the TV domain, so the gap is E_P[d] - E_Q[d]
  // with d = k* - k.
  const ScoringFunction ideal = IdealGaussian(gen, g);
  const RealReports joint = SampleTasks(g, draws, rng);
  std::normal_distribution<double> marginal(g.m0, std::sqrt(g.variance()));
  std::vector<double> dp(draws), dq(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    dp[i] = Evaluate(ideal, joint.x[i], joint.y[i]) - Evaluate(k, joint.x[i], joint.y[i]);
    const double x = marginal(rng);
    const double y = marginal(rng);
    dq[i] = Evaluate(ideal, x, y) - Evaluate(k, x, y);
  }
  const auto [mp, sp] = MeanAndStandardError(dp);
  const auto [mq, sq] = MeanAndStandardError(dq);
  return {mp - mq, std::sqrt(sp * sp + sq * sq)};
}

double TvDistanceUnhalved(const FiniteDistribution& p, const FiniteDistribution& q) {
  if (p.size() != q.size()) throw InvalidInput("TvDistance: outcome sets differ");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += std::abs(p[i] - q[i]);
  return total;
}

double TvDistance(const FiniteDistribution& p, const FiniteDistribution& q) {
  return 0.5 * TvDistanceUnhalved(p, q);
}

TvBoundCheck CheckTvAccuracyBound(const ConvexGenerator& gen, const FiniteJoint& joint,
                                  const FiniteJoint& perturbed, double alpha, double c_l) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw TvBoundPreconditionError(TvBoundViolation::kBadArguments, "alpha must lie in (0, 1)");
  if (joint.rows() != perturbed.rows() || joint.cols() != perturbed.cols())
    throw TvBoundPreconditionError(TvBoundViolation::kBadArguments,
                                   "perturbed joint has a different shape");
  for (double v : joint.matrix().flat())
    if (v != 0.0 && !(v > 2.0 * alpha))
      throw TvBoundPreconditionError(TvBoundViolation::kCellMass,
                                     "a cell has mass in (0, 2 alpha]");
  const double lipschitz = gen.LipschitzConstant(alpha, 1.0 / alpha);
  if (c_l < lipschitz - 1e-12)
    throw TvBoundPreconditionError(
        TvBoundViolation::kLipschitz,
        "c_L is below the Lipschitz constant " + std::to_string(lipschitz) + " on [alpha, 1/alpha]");
  TvBoundCheck check;
  check.delta = TvDistanceUnhalved(FiniteDistribution::FromMatrix(perturbed.matrix()),
                                   FiniteDistribution::FromMatrix(joint.matrix()));
  if (!(check.delta < alpha))
    throw TvBoundPreconditionError(TvBoundViolation::kPerturbationTooLarge,
                                   "perturbation distance is not below alpha");
  Tabular k = IdealFinite(gen, perturbed);
  for (double& v : k.k.flat()) v = ClampToDomain(gen, v);
  check.accuracy = Accuracy(gen, k, joint);
  check.bound = 6.0 * c_l / (alpha * alpha) * check.delta;
  check.holds = check.accuracy <= check.bound + 1e-12;
  return check;
}

}  // namespace phimech
