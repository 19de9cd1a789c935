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
#include <cstdint>
#include <string>

#include "phimech/divergence.hpp"
#include "phimech/errors.hpp"
#include "phimech/joint.hpp"
#include "phimech/mechanism.hpp"
#include "phimech/random.hpp"
#include "phimech/reports.hpp"
#include "phimech/scoring.hpp"

namespace phimech {

enum class LearnerMethod { kGenerative, kErm };
enum class FunctionClass { kTabular, kQuadratic };

struct SolverConfig {
  // First trial step; later iterations start from the Barzilai-Borwein length.
  double step_size = 0.05;
  std::size_t max_iters = 100000;
  double grad_tol = 1e-8;
  // Box [-C, C]^6 on the coefficients of the standardized features.
  double coefficient_bound = 50.0;
};

struct LearnerConfig {
  LearnerMethod method = LearnerMethod::kGenerative;
  FunctionClass function_class = FunctionClass::kTabular;
  SolverConfig solver;
  // 0 keeps the task order when splitting into thirds; any other value
  // shuffles the tasks with this seed first.
  std::uint64_t split_seed = 0;

  // Throws InvalidInput on a nonpositive step or bound or zero iterations.
  void Validate() const;
};

// Report counts over (x, y) and the frequencies counts / m.
struct EmpiricalJoint {
  Matrix counts;
  Matrix frequencies;
  std::size_t samples = 0;

  static EmpiricalJoint FromReports(const FiniteReports& reports);
  // The frequencies as a joint that may lack full support.
  FiniteJoint AsJoint() const { return FiniteJoint::AllowDegenerate(frequencies); }
};

// Reports realizing integer cell counts exactly: cell (x, y) appears
// counts(x, y) times, cells visited in row-major order.
FiniteReports ReportsWithCounts(const Matrix& counts);

// Plug-in learner: midpoint subgradient of the empirical ratio, 0 where an
// empirical marginal vanishes, clamped to the conjugate domain.
Tabular LearnGenerative(const ConvexGenerator& gen, const FiniteReports& reports);

struct ErmResult {
  ScoringFunction scorer;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  std::size_t iterations = 0;
  // Sup-norm of the projected gradient at exit.
  double gradient_norm = 0.0;
  bool converged = false;
};

// Variational empirical risk maximization over three equal thirds of the
// reports (the m mod 3 leftover tasks are dropped). The joint measure is the
// first third. The product measure pairs x-reports of the second third with
// y-reports of the third: the tabular class uses every such combination (the
// product of the two empirical marginals) and maximizes each cell in closed
// form; the quadratic class pairs them task by task and runs projected
// gradient ascent. A non-finite objective raises SolverFailure.
ErmResult LearnErm(const ConvexGenerator& gen, const FiniteReports& reports,
                   const LearnerConfig& config);
ErmResult LearnErm(const ConvexGenerator& gen, const RealReports& reports,
                   const LearnerConfig& config);

// Wrap a configured learner for RunMechanism.
FiniteLearner MakeFiniteLearner(const ConvexGenerator& gen, const LearnerConfig& config);
RealLearner MakeRealLearner(const ConvexGenerator& gen, const LearnerConfig& config);

// Mutual information minus the truthful ex-ante payment of k.
double Accuracy(const ConvexGenerator& gen, const Tabular& k, const FiniteJoint& joint);
// kl: exact for Quadratic scores, otherwise Monte Carlo with `draws` samples
// per measure. total_variation: the gap to the Gaussian ideal scorer,
// estimated on common draws. Other generators throw Unsupported.
Estimate Accuracy(const ConvexGenerator& gen, const ScoringFunction& k, const GaussianJoint& g,
                  std::size_t draws, Rng& rng);

// 1/2 sum |p - q| and the un-halved sum |p - q|.
double TvDistance(const FiniteDistribution& p, const FiniteDistribution& q);
double TvDistanceUnhalved(const FiniteDistribution& p, const FiniteDistribution& q);

enum class TvBoundViolation {
  kCellMass,              // some cell lies in (0, 2 alpha]
  kLipschitz,             // c_L below the Lipschitz constant on [alpha, 1/alpha]
  kPerturbationTooLarge,  // delta >= alpha
  kBadArguments,          // alpha outside (0, 1) or shapes differ
};

class TvBoundPreconditionError : public InvalidInput {
 public:
  TvBoundPreconditionError(TvBoundViolation violation, const std::string& what)
      : InvalidInput(what), violation_(violation) {}
  TvBoundViolation violation() const { return violation_; }

 private:
  TvBoundViolation violation_;
};

struct TvBoundCheck {
  bool holds = false;
  double accuracy = 0.0;
  // Un-halved total variation between perturbed and joint.
  double delta = 0.0;
  double bound = 0.0;
};

// Scores computed from `perturbed` are at most (6 c_L / alpha^2) delta away
// from ideal on `joint`, with delta the un-halved distance.
TvBoundCheck CheckTvAccuracyBound(const ConvexGenerator& gen, const FiniteJoint& joint,
                                  const FiniteJoint& perturbed, double alpha, double c_l);

}  // namespace phimech
