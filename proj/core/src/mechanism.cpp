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

#include "phimech/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <tuple>

#include "phimech/errors.hpp"
#include "phimech/priors.hpp"

namespace phimech {
namespace {

template <typename Reports>
double ScoreAt(const ScoringFunction& k, const Reports& r, std::size_t xs, std::size_t ys) {
  return Evaluate(k, static_cast<double>(r.x[xs]), static_cast<double>(r.y[ys]));
}

template <typename Reports>
PaymentLedger PairingPaymentImpl(const ConvexGenerator& gen, const ScoringFunction& k,
                                 const Reports& reports, const TaskAssignment& a,
                                 const TaskAssignment& b) {
  const std::size_t n = reports.size();
  if (n < 2) throw InvalidInput("PairingPayment: need at least two scoring tasks");
  a.Validate(n);
  b.Validate(n);
  auto pay = [&](const TaskAssignment& t) {
    const double bonus = ScoreAt(k, reports, t.bonus, t.bonus);
    const double penalty = ScoreAt(k, reports, t.penalty_a, t.penalty_b);
    if (!gen.InConjugateDomain(bonus))
      throw DomainError("PairingPayment: bonus score outside the conjugate domain");
    return bonus - gen.PhiStar(penalty);
  };
  return {pay(a), pay(b), a, b};
}

template <typename Reports>
PaymentLedger TaskAverageImpl(const ConvexGenerator& gen, const ScoringFunction& k,
                              const Reports& reports) {
  const std::size_t triples = reports.size() / 3;
  if (triples == 0) throw InvalidInput("TaskAveragePayment: need at least three tasks");
  double alice = 0.0, bob = 0.0;
  PaymentLedger last;
  for (std::size_t t = 0; t < triples; ++t) {
    const std::size_t base = 3 * t;
    last = PairingPaymentImpl(gen, k, reports, {base, base + 1, base + 2},
                              {base, base + 2, base + 1});
    alice += last.alice;
    bob += last.bob;
  }
  last.alice = alice / static_cast<double>(triples);
  last.bob = bob / static_cast<double>(triples);
  last.assignment_a = {0, 1, 2};
  last.assignment_b = {0, 2, 1};
  return last;
}

template <typename Reports>
PaymentLedger Pay(const ConvexGenerator& gen, const ScoringFunction& k, const Reports& scoring,
                  Rng& rng, const PaymentOptions& options) {
  switch (options.estimator) {
    case PaymentEstimator::kTaskAverage: return TaskAverageImpl(gen, k, scoring);
    case PaymentEstimator::kSingle: {
      const auto [a, b] = options.assignment == AssignmentMode::kUniform
                              ? UniformAssignment(scoring.size(), rng)
                              : RoundRobinAssignment(scoring.size());
      return PairingPaymentImpl(gen, k, scoring, a, b);
    }
    case PaymentEstimator::kConditional:
      throw InvalidInput("the conditional estimator needs the prior; use SimulateMechanism");
  }
  return {};
}

template <typename Learner, typename Reports>
MechanismRun RunMechanismImpl(const ConvexGenerator& gen, const Learner& learner,
                              const Reports& reports, std::size_t m_learn, Rng& rng,
                              const PaymentOptions& options) {
  reports.Validate();
  if (reports.size() < m_learn + 2)
    throw InvalidInput("RunMechanism: " + std::to_string(reports.size()) +
                       " tasks cannot cover " + std::to_string(m_learn) +
                       " learning tasks plus 2 scoring tasks");
  ScoringFunction k = ClampToDomain(gen, learner(reports.Slice(0, m_learn)));
  const Reports scoring = reports.Slice(m_learn, reports.size());
  PaymentLedger ledger = Pay(gen, k, scoring, rng, options);
  return {ledger, std::move(k)};
}

void Finalize(ExperimentReport& report) {
  report.replicates = report.alice.size();
  std::tie(report.mean_alice, report.se_alice) = MeanAndStandardError(report.alice);
  std::tie(report.mean_bob, report.se_bob) = MeanAndStandardError(report.bob);
}

}  // namespace

void TaskAssignment::Validate(std::size_t n) const {
  if (bonus >= n || penalty_a >= n || penalty_b >= n)
    throw InvalidInput("TaskAssignment: task index outside the scoring tasks");
  if (penalty_a == penalty_b) throw InvalidInput("TaskAssignment: penalty tasks must differ");
}

std::pair<TaskAssignment, TaskAssignment> RoundRobinAssignment(std::size_t n) {
  if (n < 2) throw InvalidInput("RoundRobinAssignment: need at least two scoring tasks");
  return {{0, 1 % n, 2 % n}, {0, 2 % n, 1 % n}};
}

std::pair<TaskAssignment, TaskAssignment> UniformAssignment(std::size_t n, Rng& rng) {
  if (n < 2) throw InvalidInput("UniformAssignment: need at least two scoring tasks");
  auto draw = [&] {
    std::uniform_int_distribution<std::size_t> any(0, n - 1);
    std::uniform_int_distribution<std::size_t> other(0, n - 2);
    TaskAssignment t;
    t.bonus = any(rng);
    t.penalty_a = any(rng);
    t.penalty_b = other(rng);
    if (t.penalty_b >= t.penalty_a) ++t.penalty_b;
    return t;
  };
  TaskAssignment a = draw();
  TaskAssignment b = draw();
  return {a, b};
}

PaymentLedger PairingPayment(const ConvexGenerator& gen, const ScoringFunction& k,
                             const FiniteReports& reports, const TaskAssignment& a,
                             const TaskAssignment& b) {
  reports.Validate();
  return PairingPaymentImpl(gen, k, reports, a, b);
}

PaymentLedger PairingPayment(const ConvexGenerator& gen, const ScoringFunction& k,
                             const RealReports& reports, const TaskAssignment& a,
                             const TaskAssignment& b) {
  reports.Validate();
  return PairingPaymentImpl(gen, k, reports, a, b);
}

PaymentLedger TaskAveragePayment(const ConvexGenerator& gen, const ScoringFunction& k,
                                 const FiniteReports& reports) {
  reports.Validate();
  return TaskAverageImpl(gen, k, reports);
}

PaymentLedger TaskAveragePayment(const ConvexGenerator& gen, const ScoringFunction& k,
                                 const RealReports& reports) {
  reports.Validate();
  return TaskAverageImpl(gen, k, reports);
}

double ExactExAntePayment(const ConvexGenerator& gen, const Tabular& k, const FiniteJoint& joint,
                          const StrategyProfile& profile) {
  const Matrix& ta = profile.alice.matrix();
  const Matrix& tb = profile.bob.matrix();
  if (ta.rows() != joint.rows() || tb.rows() != joint.cols())
    throw InvalidInput("ExactExAntePayment: strategy dimensions do not match the signal spaces");
  if (k.k.rows() != ta.cols() || k.k.cols() != tb.cols())
    throw InvalidInput("ExactExAntePayment: score table does not match the report spaces");
  Matrix conj(k.k.rows(), k.k.cols());
  for (std::size_t i = 0; i < conj.size(); ++i) conj.flat()[i] = gen.PhiStar(k.k.flat()[i]);

  const auto& px = joint.row_marginal();
  const auto& py = joint.col_marginal();
  double reward = 0.0;
  double penalty = 0.0;
  for (std::size_t x = 0; x < joint.rows(); ++x) {
    for (std::size_t y = 0; y < joint.cols(); ++y) {
      const double p = joint(x, y);
      const double q = px[x] * py[y];
      double kr = 0.0, kp = 0.0;
      for (std::size_t xr = 0; xr < ta.cols(); ++xr) {
        const double wa = ta(x, xr);
        if (wa == 0.0) continue;
        for (std::size_t yr = 0; yr < tb.cols(); ++yr) {
          const double w = wa * tb(y, yr);
          kr += w * k(xr, yr);
          kp += w * conj(xr, yr);
        }
      }
      reward += p * kr;
      penalty += q * kp;
    }
  }
  return reward - penalty;
}

FantasyResult FantasyPayment(const ConvexGenerator& gen, const FiniteJoint& joint,
                             const StrategyProfile& profile) {
  const FiniteJoint reported = Pushforward(joint, profile);
  const Tabular k = IdealFinite(gen, reported);
  return {ExactExAntePayment(gen, k, joint, profile), !reported.full_support()};
}

std::pair<double, double> MeanAndStandardError(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

ExperimentReport MonteCarloPayment(const ConvexGenerator& gen, const ScoringFunction& k,
                                   const FiniteJoint& joint, const StrategyProfile& profile,
                                   std::size_t m, std::size_t reps, std::uint64_t seed,
                                   const PaymentOptions& options) {
  if (m < 2 || reps < 1) throw InvalidInput("MonteCarloPayment: need m >= 2 and reps >= 1");
  ValidateRange(gen, k);
  ExperimentReport report;
  report.seed = seed;
  for (std::size_t r = 0; r < reps; ++r) {
    if (options.estimator == PaymentEstimator::kConditional) {
      const double v = ExactExAntePayment(gen, std::get<Tabular>(k), joint, profile);
      report.alice.push_back(v);
      report.bob.push_back(v);
      continue;
    }
    Rng rng = MakeRng(DeriveSeed(seed, r));
    const FiniteReports signals = SampleTasks(joint, m, rng);
    const FiniteReports reports = Apply(profile, signals, rng);
    const PaymentLedger ledger = Pay(gen, k, reports, rng, options);
    report.alice.push_back(ledger.alice);
    report.bob.push_back(ledger.bob);
  }
  Finalize(report);
  return report;
}

ExperimentReport MonteCarloPayment(const ConvexGenerator& gen, const ScoringFunction& k,
                                   const GaussianJoint& joint, const StrategyProfile& profile,
                                   std::size_t m, std::size_t reps, std::uint64_t seed,
                                   const PaymentOptions& options) {
  if (m < 2 || reps < 1) throw InvalidInput("MonteCarloPayment: need m >= 2 and reps >= 1");
  ValidateRange(gen, k);
  ExperimentReport report;
  report.seed = seed;
  for (std::size_t r = 0; r < reps; ++r) {
    Rng rng = MakeRng(DeriveSeed(seed, r));
    const RealReports reports = Apply(profile, SampleTasks(joint, m, rng));
    const PaymentLedger ledger = Pay(gen, k, reports, rng, options);
    report.alice.push_back(ledger.alice);
    report.bob.push_back(ledger.bob);
  }
  Finalize(report);
  return report;
}

MechanismRun RunMechanism(const ConvexGenerator& gen, const FiniteLearner& learner,
                          const FiniteReports& reports, std::size_t m_learn, Rng& rng,
                          const PaymentOptions& options) {
  return RunMechanismImpl(gen, learner, reports, m_learn, rng, options);
}

MechanismRun RunMechanism(const ConvexGenerator& gen, const RealLearner& learner,
                          const RealReports& reports, std::size_t m_learn, Rng& rng,
                          const PaymentOptions& options) {
  return RunMechanismImpl(gen, learner, reports, m_learn, rng, options);
}

ExperimentReport SimulateMechanism(const ConvexGenerator& gen, const FiniteLearner& learner,
                                   const FiniteJoint& joint, const StrategyProfile& profile,
                                   std::size_t m, std::size_t m_learn, std::size_t reps,
                                   std::uint64_t seed, const PaymentOptions& options) {
  if (reps < 1) throw InvalidInput("SimulateMechanism: need at least one replicate");
  ExperimentReport report;
  report.seed = seed;
  for (std::size_t r = 0; r < reps; ++r) {
    Rng rng = MakeRng(DeriveSeed(seed, r));
    const FiniteReports reports = Apply(profile, SampleTasks(joint, m, rng), rng);
    if (options.estimator == PaymentEstimator::kConditional) {
      if (m < m_learn + 2) throw InvalidInput("SimulateMechanism: too few tasks");
      const ScoringFunction k = ClampToDomain(gen, learner(reports.Slice(0, m_learn)));
      const double v = ExactExAntePayment(gen, std::get<Tabular>(k), joint, profile);
      report.alice.push_back(v);
      report.bob.push_back(v);
      continue;
    }
    const MechanismRun run = RunMechanism(gen, learner, reports, m_learn, rng, options);
    report.alice.push_back(run.ledger.alice);
    report.bob.push_back(run.ledger.bob);
  }
  Finalize(report);
  return report;
}

void CrowdReports::Validate() const {
  if (reports.empty()) throw InvalidInput("CrowdReports: no agents");
  const std::size_t m = reports.front().size();
  for (const auto& agent : reports) {
    if (agent.size() != m) throw InvalidInput("CrowdReports: agents report on different tasks");
    for (int r : agent)
      if (r < 0 || static_cast<std::size_t>(r) >= n_reports)
        throw InvalidInput("CrowdReports: report out of range");
  }
}

std::vector<AgentPayment> MultiAgentRandomPairing(const ConvexGenerator& gen,
                                                  const FiniteLearner& learner,
                                                  const CrowdReports& crowd, std::size_t m_learn,
                                                  Rng& rng, const PaymentOptions& options) {
  crowd.Validate();
  const std::size_t n = crowd.n_agents();
  if (n < 2) throw InvalidInput("MultiAgentRandomPairing: need at least two agents");
  std::vector<AgentPayment> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 2);
    std::size_t peer = pick(rng);
    if (peer >= i) ++peer;
    const FiniteReports pair{crowd.n_reports, crowd.n_reports, crowd.reports[i],
                             crowd.reports[peer]};
    out.push_back({i, peer, RunMechanism(gen, learner, pair, m_learn, rng, options).ledger});
  }
  return out;
}

std::vector<int> PluralityVote(const CrowdReports& peers) {
  peers.Validate();
  std::vector<int> labels(peers.n_tasks());
  std::vector<std::size_t> votes(peers.n_reports);
  for (std::size_t s = 0; s < peers.n_tasks(); ++s) {
    std::fill(votes.begin(), votes.end(), 0);
    for (const auto& agent : peers.reports) ++votes[agent[s]];
    // max_element returns the first maximum, i.e. the lowest label on ties.
    labels[s] = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  }
  return labels;
}

MechanismRun MultiAgentLatentPairing(const ConvexGenerator& gen, const FiniteLearner& learner,
                                     const CrowdReports& crowd, std::size_t agent,
                                     std::size_t m_learn, Rng& rng,
                                     const LatentRecovery& recovery,
                                     const PaymentOptions& options) {
  crowd.Validate();
  if (agent >= crowd.n_agents()) throw InvalidInput("MultiAgentLatentPairing: agent out of range");
  if (crowd.n_agents() < 3)
    throw InvalidInput("MultiAgentLatentPairing: need at least two peers besides the agent");
  CrowdReports peers{crowd.n_reports, {}};
  for (std::size_t i = 0; i < crowd.n_agents(); ++i)
    if (i != agent) peers.reports.push_back(crowd.reports[i]);
  std::vector<int> latent = recovery(peers);
  if (latent.size() != crowd.n_tasks())
    throw InvalidInput("MultiAgentLatentPairing: recovery returned the wrong number of labels");
  const FiniteReports pair{crowd.n_reports, crowd.n_reports, crowd.reports[agent],
                           std::move(latent)};
  return RunMechanism(gen, learner, pair, m_learn, rng, options);
}

}  // namespace phimech
