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
#include <functional>
#include <utility>
#include <vector>

#include "phimech/divergence.hpp"
#include "phimech/joint.hpp"
#include "phimech/random.hpp"
#include "phimech/reports.hpp"
#include "phimech/scoring.hpp"
#include "phimech/strategies.hpp"

namespace phimech {

// Tasks used for one agent's payment: the bonus pair (x_b, y_b) and the
// penalty pair (x_{penalty_a}, y_{penalty_b}), which mixes Alice's report on
// one task with Bob's report on a different one.
struct TaskAssignment {
  std::size_t bonus = 0;
  std::size_t penalty_a = 1;
  std::size_t penalty_b = 2;

  // Throws InvalidInput unless every index is below n and the penalty tasks
  // differ. The bonus task may coincide with a penalty task.
  void Validate(std::size_t n) const;
  friend bool operator==(const TaskAssignment&, const TaskAssignment&) = default;
};

struct PaymentLedger {
  double alice = 0.0;
  double bob = 0.0;
  TaskAssignment assignment_a;
  TaskAssignment assignment_b;
};

enum class AssignmentMode { kRoundRobin, kUniform };

// Round-robin over n scoring tasks: Alice gets (0, 1, 2), Bob (0, 2, 1), all
// mod n. Needs n >= 2.
std::pair<TaskAssignment, TaskAssignment> RoundRobinAssignment(std::size_t n);
// Bonus uniform on [0, n), penalties a uniform ordered pair of distinct tasks.
std::pair<TaskAssignment, TaskAssignment> UniformAssignment(std::size_t n, Rng& rng);

// K(x_b, y_b) - Phi*(K(x_pa, y_pb)) for each agent.
PaymentLedger PairingPayment(const ConvexGenerator& gen, const ScoringFunction& k,
                             const FiniteReports& reports, const TaskAssignment& a,
                             const TaskAssignment& b);
PaymentLedger PairingPayment(const ConvexGenerator& gen, const ScoringFunction& k,
                             const RealReports& reports, const TaskAssignment& a,
                             const TaskAssignment& b);

// Average of the pairing payment over the disjoint triples (3t, 3t+1, 3t+2)
// of the reports, Alice using (3t, 3t+1, 3t+2) and Bob (3t, 3t+2, 3t+1).
// Same expectation as one payment, lower variance. Needs at least 3 tasks.
PaymentLedger TaskAveragePayment(const ConvexGenerator& gen, const ScoringFunction& k,
                                 const FiniteReports& reports);
PaymentLedger TaskAveragePayment(const ConvexGenerator& gen, const ScoringFunction& k,
                                 const RealReports& reports);

// Alice's expected payment under the prior and strategy profile,
//   sum_{x,y} p(x,y) sum theta_A(x,x') theta_B(y,y') k(x',y')
//   - sum_{x,y} p_X(x) p_Y(y) sum theta_A(x,x') theta_B(y,y') Phi*(k(x',y')).
// Bob's expected payment is the same quantity.
double ExactExAntePayment(const ConvexGenerator& gen, const Tabular& k, const FiniteJoint& joint,
                          const StrategyProfile& profile);

struct FantasyResult {
  double value = 0.0;
  // The report distribution lost full support; the value is computed over
  // the supported cells only.
  bool degenerate = false;
};

// Expected payment when the scorer is ideal for the reports' own
// distribution.
FantasyResult FantasyPayment(const ConvexGenerator& gen, const FiniteJoint& joint,
                             const StrategyProfile& profile);

// Aggregate over independent replicates. Replicate r draws from the stream
// DeriveSeed(seed, r); results are stored by replicate index.
struct ExperimentReport {
  std::vector<double> alice;
  std::vector<double> bob;
  double mean_alice = 0.0;
  double mean_bob = 0.0;
  double se_alice = 0.0;
  double se_bob = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
};

// Mean and standard error of the mean (0 for a single value).
std::pair<double, double> MeanAndStandardError(const std::vector<double>& values);

// How each replicate turns reports into a payment.
enum class PaymentEstimator {
  kSingle,       // one pairing payment with the assignment rule
  kTaskAverage,  // TaskAveragePayment over the scoring tasks
  kConditional,  // expected payment given the scorer (finite priors only)
};

struct PaymentOptions {
  PaymentEstimator estimator = PaymentEstimator::kSingle;
  AssignmentMode assignment = AssignmentMode::kRoundRobin;
};

// Mechanism 1 with a fixed scorer on freshly sampled, strategized reports.
ExperimentReport MonteCarloPayment(const ConvexGenerator& gen, const ScoringFunction& k,
                                   const FiniteJoint& joint, const StrategyProfile& profile,
                                   std::size_t m, std::size_t reps, std::uint64_t seed,
                                   const PaymentOptions& options = {});
ExperimentReport MonteCarloPayment(const ConvexGenerator& gen, const ScoringFunction& k,
                                   const GaussianJoint& joint, const StrategyProfile& profile,
                                   std::size_t m, std::size_t reps, std::uint64_t seed,
                                   const PaymentOptions& options = {});

// A learner maps the learning-partition reports to a scorer.
using FiniteLearner = std::function<ScoringFunction(const FiniteReports&)>;
using RealLearner = std::function<ScoringFunction(const RealReports&)>;

struct MechanismRun {
  PaymentLedger ledger;
  // The learned scorer after clamping to the conjugate domain.
  ScoringFunction scorer;
};

// Mechanism 2: the first m_learn tasks train the scorer, the remaining tasks
// (at least 2) are scored. `rng` is only drawn from in uniform assignment mode.
MechanismRun RunMechanism(const ConvexGenerator& gen, const FiniteLearner& learner,
                          const FiniteReports& reports, std::size_t m_learn, Rng& rng,
                          const PaymentOptions& options = {});
MechanismRun RunMechanism(const ConvexGenerator& gen, const RealLearner& learner,
                          const RealReports& reports, std::size_t m_learn, Rng& rng,
                          const PaymentOptions& options = {});

// Replicated Mechanism 2 under a finite prior and strategy profile.
// The conditional estimator reports ExactExAntePayment of the learned scorer.
ExperimentReport SimulateMechanism(const ConvexGenerator& gen, const FiniteLearner& learner,
                                   const FiniteJoint& joint, const StrategyProfile& profile,
                                   std::size_t m, std::size_t m_learn, std::size_t reps,
                                   std::uint64_t seed, const PaymentOptions& options = {});

// reports[i][s] is agent i's report on task s, every report below n_reports.
struct CrowdReports {
  std::size_t n_reports = 0;
  std::vector<std::vector<int>> reports;

  std::size_t n_agents() const { return reports.size(); }
  std::size_t n_tasks() const { return reports.empty() ? 0 : reports.front().size(); }
  void Validate() const;
};

struct AgentPayment {
  std::size_t agent = 0;
  std::size_t peer = 0;
  // The agent plays Alice and the peer Bob.
  PaymentLedger ledger;
};

// Each agent is paired with a uniformly chosen distinct peer and paid by
// RunMechanism on the pair's reports.
std::vector<AgentPayment> MultiAgentRandomPairing(const ConvexGenerator& gen,
                                                  const FiniteLearner& learner,
                                                  const CrowdReports& crowd, std::size_t m_learn,
                                                  Rng& rng, const PaymentOptions& options = {});

// Latent-label estimate per task from the peers' reports (the paid agent's
// reports are excluded by the caller).
using LatentRecovery = std::function<std::vector<int>(const CrowdReports& peers)>;

// Per-task plurality vote, ties to the lowest label.
std::vector<int> PluralityVote(const CrowdReports& peers);

// Pays `agent` against latent labels recovered from everybody else. Needs at
// least 3 agents so that at least two peers vote.
MechanismRun MultiAgentLatentPairing(const ConvexGenerator& gen, const FiniteLearner& learner,
                                     const CrowdReports& crowd, std::size_t agent,
                                     std::size_t m_learn, Rng& rng,
                                     const LatentRecovery& recovery = PluralityVote,
                                     const PaymentOptions& options = {});

}  // namespace phimech
