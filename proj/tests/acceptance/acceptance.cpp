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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "phimech/divergence.hpp"
#include "phimech/errors.hpp"
#include "phimech/learning.hpp"
#include "phimech/mechanism.hpp"
#include "phimech/priors.hpp"
#include "phimech/scoring.hpp"
#include "phimech/strategies.hpp"

namespace {

using namespace phimech;

constexpr std::uint64_t kSeed = 0x5eed2026;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string Num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::size_t Between(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Strategy NonPermutation(std::size_t n, Rng& rng) {
  for (;;) {
    Strategy s = RandomStrategy(n, n, rng);
    if (!IsPermutation(s)) return s;
  }
}

StrategyProfile ObliviousProfile(std::size_t n, int variant, Rng& rng) {
  switch (variant % 3) {
    case 0: return {RandomOblivious(n, n, rng), RandomOblivious(n, n, rng)};
    case 1: return {RandomOblivious(n, n, rng), RandomStrategy(n, n, rng)};
    default: return {RandomStrategy(n, n, rng), RandomOblivious(n, n, rng)};
  }
}

std::size_t SignalIndex(const Strategy& permutation, std::size_t x) {
  std::size_t u = 0;
  while (permutation.matrix()(x, u) != 1.0) ++u;
  return u;
}

// 1. Fixture fidelity.
Outcome GradingFixture() {
  const FiniteJoint p = GradingJoint();
  const Matrix ratio{{1.25, 1.00, 0.75}, {1.00, 1.00, 1.00}, {0.75, 1.00, 1.25}};
  const Matrix cond{{0.5, 0.2, 0.3}, {0.4, 0.2, 0.4}, {0.3, 0.2, 0.5}};
  const double e_ratio = MaxAbsDiff(RatioMatrix(p), ratio);
  const double e_cond = MaxAbsDiff(ConditionalYGivenX(p), cond);
  const double det = std::abs(Determinant(p.matrix()));
  const bool sr = IsStochasticRelevant(p), fg = IsFineGrained(p), sc = IsStrictlyCorrelated(p);
  const bool ok = e_ratio <= 1e-12 && e_cond <= 1e-12 && det <= 1e-12 && sr && !fg && !sc;
  return {ok, "ratio err " + Num(e_ratio) + ", conditional err " + Num(e_cond) + ", |det| " + Num(det) +
                  ", relevant " + std::to_string(sr) + ", fine " + std::to_string(fg) + ", strict " +
                  std::to_string(sc)};
}

// 2. Truthful ideal payment equals mutual information.
Outcome TruthfulIdentity() {
  Rng rng = MakeRng(DeriveSeed(kSeed, 2));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const FiniteJoint p = RandomFullSupportJoint(Between(rng, 3, 5), Between(rng, 3, 5), rng);
    for (const ConvexGenerator gen : ConvexGenerator::All()) {
      const double pay = ExactExAntePayment(gen, IdealFinite(gen, p), p, TruthProfile(p.rows(), p.cols()));
      worst = std::max(worst, std::abs(pay - MutualInformation(gen, p)));
    }
  }
  return {worst <= 1e-9, "400 cases, max |payment - MI| " + Num(worst)};
}

// 3. No profile and scorer beats the mutual information.
Outcome UniversalBound() {
  Rng rng = MakeRng(DeriveSeed(kSeed, 3));
  int violations = 0;
  double worst = -1e300;
  for (int i = 0; i < 1000; ++i) {
    const ConvexGenerator gen = ConvexGenerator::All()[i % 4];
    const std::size_t n = Between(rng, 2, 5);
    const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
    const StrategyProfile theta = RandomProfile(n, rng);
    Tabular k{Matrix(n, n)};
    for (double& v : k.k.flat()) v = ClampToDomain(gen, 6.0 * (Uniform01(rng) - 0.5));
    const double excess = ExactExAntePayment(gen, k, p, theta) - MutualInformation(gen, p);
    worst = std::max(worst, excess);
    if (excess > 1e-9) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " violations, max payment - MI " + Num(worst)};
}

// 4. Oblivious profiles earn nothing in expectation.
Outcome ObliviousNonpositive() {
  Rng rng = MakeRng(DeriveSeed(kSeed, 4));
  double worst = -1e300;
  for (int i = 0; i < 200; ++i) {
    const ConvexGenerator gen = ConvexGenerator::All()[i % 4];
    const std::size_t n = Between(rng, 2, 5);
    const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
    const StrategyProfile theta = ObliviousProfile(n, i, rng);
    worst = std::max(worst, ExactExAntePayment(gen, RandomTabular(gen, n, n, rng), p, theta));
  }
  return {worst <= 1e-9, "max payment " + Num(worst)};
}

// 5. Permutations keep the full value; everything else loses some.
Outcome PermutationCharacterization() {
  Rng rng = MakeRng(DeriveSeed(kSeed, 5));
  const auto kl = ConvexGenerator::Catalog("kl");
  double worst_eq = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = Between(rng, 2, 5);
    const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
    const Strategy pa = RandomPermutation(n, rng), pb = RandomPermutation(n, rng);
    const Tabular ideal = IdealFinite(kl, p);
    Tabular k{Matrix(n, n)};
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) k.k(SignalIndex(pa, x), SignalIndex(pb, y)) = ideal(x, y);
    worst_eq = std::max(worst_eq, std::abs(ExactExAntePayment(kl, k, p, {pa, pb}) - MutualInformation(kl, p)));
  }
  double min_gap = 1e300;
  int tested = 0;
  while (tested < 200) {
    const std::size_t n = Between(rng, 2, 5);
    const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
    // Conditional rows must differ by a visible margin; a prior that is only
    // relevant up to rounding has almost no mutual information to lose.
    if (!IsStochasticRelevant(p, 0.05)) continue;
    StrategyProfile theta{NonPermutation(n, rng), NonPermutation(n, rng)};
    if (tested % 2) theta.bob = RandomPermutation(n, rng);
    min_gap = std::min(min_gap, MutualInformation(kl, p) - FantasyPayment(kl, p, theta).value);
    ++tested;
  }
  return {worst_eq <= 1e-9 && min_gap > 1e-6,
          "max |perm payment - MI| " + Num(worst_eq) + ", min MI - fantasy " + Num(min_gap)};
}

// 6. Bregman gap identity.
Outcome BregmanIdentity() {
  Rng rng = MakeRng(DeriveSeed(kSeed, 6));
  double worst = 0.0;
  for (const char* name : {"kl", "chi_squared"}) {
    const auto gen = ConvexGenerator::Catalog(name);
    for (int i = 0; i < 100; ++i) {
      const FiniteJoint p = RandomFullSupportJoint(Between(rng, 2, 5), Between(rng, 2, 5), rng);
      const Tabular k = RandomTabular(gen, p.rows(), p.cols(), rng);
      const double gap = BregmanGap(gen, k, p);
      worst = std::max(worst, std::abs(gap - (MutualInformation(gen, p) - VariationalValue(gen, k, p))));
    }
  }
  return {worst <= 1e-9, "max |gap - (MI - value)| " + Num(worst)};
}

// 7. Variational one-sidedness and attainment.
Outcome VariationalRepresentation() {
  Rng rng = MakeRng(DeriveSeed(kSeed, 7));
  double worst_excess = -1e300, worst_ideal = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ConvexGenerator gen = ConvexGenerator::All()[i % 4];
    const FiniteJoint p = RandomFullSupportJoint(Between(rng, 2, 5), Between(rng, 2, 5), rng);
    const double mi = MutualInformation(gen, p);
    worst_excess = std::max(worst_excess, VariationalValue(gen, RandomTabular(gen, p.rows(), p.cols(), rng), p) - mi);
    worst_ideal = std::max(worst_ideal, std::abs(VariationalValue(gen, IdealFinite(gen, p), p) - mi));
  }
  return {worst_excess <= 1e-9 && worst_ideal <= 1e-9,
          "max value - divergence " + Num(worst_excess) + ", max |ideal - divergence| " + Num(worst_ideal)};
}

// 8. Perturbation to accuracy bound.
Outcome TvToAccuracy() {
  Rng rng = MakeRng(DeriveSeed(kSeed, 8));
  int failures = 0;
  double tightest = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t nx = Between(rng, 2, 4), ny = Between(rng, 2, 4);
    const std::size_t cells = nx * ny;
    const auto w = SampleSimplex(cells, rng);
    Matrix pm(nx, ny);
    for (std::size_t c = 0; c < cells; ++c) pm.flat()[c] = 0.5 * w[c] + 0.5 / static_cast<double>(cells);
    const double alpha = 0.2 / static_cast<double>(cells);
    const double shift = 0.45 * alpha * Uniform01(rng);
    const std::size_t from = Between(rng, 0, cells - 1);
    std::size_t to = Between(rng, 0, cells - 2);
    if (to >= from) ++to;
    Matrix qm = pm;
    qm.flat()[from] -= shift;
    qm.flat()[to] += shift;
    const ConvexGenerator gen = ConvexGenerator::All()[i % 4];
    const TvBoundCheck c =
        CheckTvAccuracyBound(gen, FiniteJoint(pm), FiniteJoint(qm), alpha, gen.LipschitzConstant(alpha, 1 / alpha));
    if (!c.holds) ++failures;
    if (c.bound > 0) tightest = std::max(tightest, c.accuracy / c.bound);
  }
  return {failures == 0, std::to_string(failures) + " failures, max accuracy / bound " + Num(tightest)};
}

// 9. Exact-frequency learning reproduces the ideal bit for bit.
Outcome ExactFrequency() {
  const FiniteReports r = ReportsWithCounts(Matrix{{5, 2, 3}, {2, 1, 2}, {3, 2, 5}});
  int mismatched = 0;
  for (const ConvexGenerator gen : ConvexGenerator::All())
    if (!(LearnGenerative(gen, r).k == IdealFinite(gen, GradingJoint()).k)) ++mismatched;
  return {mismatched == 0, std::to_string(mismatched) + " of 4 generators differ"};
}

// 10. Both learners converge on the grading prior.
Outcome LearningConsistency() {
  const auto kl = ConvexGenerator::Catalog("kl");
  const FiniteJoint p = GradingJoint();
  std::string detail;
  bool ok = true;
  for (const LearnerMethod method : {LearnerMethod::kGenerative, LearnerMethod::kErm}) {
    LearnerConfig cfg;
    cfg.method = method;
    const FiniteLearner learn = MakeFiniteLearner(kl, cfg);
    std::vector<double> medians;
    for (const std::size_t m : {1000u, 10000u, 100000u}) {
      std::vector<double> acc;
      for (std::uint64_t s = 0; s < 50; ++s) {
        Rng rng = MakeRng(DeriveSeed(DeriveSeed(kSeed, 10 + static_cast<int>(method)), m * 100 + s));
        acc.push_back(Accuracy(kl, std::get<Tabular>(ClampToDomain(kl, learn(SampleTasks(p, m, rng)))), p));
      }
      medians.push_back(Median(acc));
    }
    const bool good = medians[0] >= medians[1] && medians[1] >= medians[2] && medians[2] < 1e-2;
    ok = ok && good;
    detail += std::string(method == LearnerMethod::kGenerative ? "generative" : "erm") + " medians " +
              Num(medians[0]) + " / " + Num(medians[1]) + " / " + Num(medians[2]) + "; ";
  }
  return {ok, detail};
}

// 11. Quadratic ERM on the Gaussian prior.
Outcome GaussianErm() {
  const auto kl = ConvexGenerator::Catalog("kl");
  const GaussianJoint g(0.0, 1.0, 4.0);
  LearnerConfig cfg;
  cfg.method = LearnerMethod::kErm;
  cfg.function_class = FunctionClass::kQuadratic;
  std::vector<double> values;
  int converged = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng = MakeRng(DeriveSeed(DeriveSeed(kSeed, 11), s));
    const ErmResult fit = LearnErm(kl, SampleTasks(g, 30000, rng), cfg);
    converged += fit.converged;
    values.push_back(VariationalValue(kl, fit.scorer, g, 0, rng).value);
  }
  const double med = Median(values);
  return {std::abs(med - 0.020405) <= 0.01, "median variational value " + Num(med) + " (target 0.020405), " +
                                                 std::to_string(converged) + "/10 solver runs converged"};
}

// 12. The learning mechanism separates truth-telling from deviations.
Outcome EndToEndTruthfulness() {
  const auto kl = ConvexGenerator::Catalog("kl");
  const FiniteJoint p = GradingJoint();
  const FiniteLearner learn = MakeFiniteLearner(kl, LearnerConfig{});
  const PaymentOptions options{PaymentEstimator::kConditional, AssignmentMode::kRoundRobin};
  constexpr std::size_t m = 2000, m_learn = 1500, reps = 20;
  auto mean = [&](const StrategyProfile& theta, std::uint64_t stream) {
    return SimulateMechanism(kl, learn, p, theta, m, m_learn, reps, DeriveSeed(kSeed, stream), options).mean_alice;
  };
  const double truth = mean(TruthProfile(3, 3), 1200);
  Rng rng = MakeRng(DeriveSeed(kSeed, 12));
  double best_other = -1e300;
  for (int i = 0; i < 50; ++i) {
    const StrategyProfile theta{NonPermutation(3, rng), NonPermutation(3, rng)};
    best_other = std::max(best_other, mean(theta, 1300 + i));
  }
  double best_oblivious = -1e300;
  for (int i = 0; i < 30; ++i) best_oblivious = std::max(best_oblivious, mean(ObliviousProfile(3, i, rng), 1400 + i));
  const auto u = Oblivious(FiniteDistribution::Uniform(3), 3);
  best_oblivious = std::max(best_oblivious, mean({u, u}, 1500));
  return {truth > best_other && truth - best_oblivious > 0.015,
          "truth " + Num(truth) + ", best non-permutation " + Num(best_other) + ", best oblivious " +
              Num(best_oblivious)};
}

// 13. Latent-label pairing in a Dawid-Skene crowd.
Outcome LatentPairing() {
  const auto kl = ConvexGenerator::Catalog("kl");
  std::vector<Matrix> confusion(10, Matrix{{0.8, 0.2}, {0.2, 0.8}});
  const DawidSkeneModel model(FiniteDistribution({0.5, 0.5}), confusion);
  const FiniteLearner learn = MakeFiniteLearner(kl, LearnerConfig{});
  const PaymentOptions options{PaymentEstimator::kTaskAverage, AssignmentMode::kRoundRobin};
  const Strategy noise = Oblivious(FiniteDistribution::Uniform(2), 2);
  constexpr std::size_t m = 1000, m_learn = 500, reps = 20;
  bool ok = true;
  std::string detail;
  for (const std::size_t target : {0u, 4u, 9u}) {
    std::vector<double> truthful, noisy;
    for (std::uint64_t r = 0; r < reps; ++r) {
      Rng rng = MakeRng(DeriveSeed(DeriveSeed(kSeed, 13 + target), r));
      const CrowdSample sample = SampleTasks(model, m, rng);
      CrowdReports crowd{2, sample.reports};
      truthful.push_back(MultiAgentLatentPairing(kl, learn, crowd, target, m_learn, rng, PluralityVote, options).ledger.alice);
      const FiniteReports own{2, 2, crowd.reports[target], crowd.reports[target]};
      crowd.reports[target] = Apply({noise, TruthTelling(2)}, own, rng).x;
      noisy.push_back(MultiAgentLatentPairing(kl, learn, crowd, target, m_learn, rng, PluralityVote, options).ledger.alice);
    }
    const auto [mt, st] = MeanAndStandardError(truthful);
    const auto [mn, sn] = MeanAndStandardError(noisy);
    const double se = std::sqrt(st * st + sn * sn);
    ok = ok && (mt - mn) > 3 * se;
    detail += "agent " + std::to_string(target) + ": " + Num(mt) + " vs " + Num(mn) + " (SE " + Num(se) + "); ";
  }
  return {ok, detail};
}

// 14. Total variation pairing reduces to bonus minus penalty agreement.
Outcome CorrelatedAgreement() {
  const auto tv = ConvexGenerator::Catalog("total_variation");
  Rng rng = MakeRng(DeriveSeed(kSeed, 14));
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = Between(rng, 2, 5), tasks = Between(rng, 2, 6);
    const Tabular k = RandomTabular(tv, n, n, rng);
    FiniteReports r{n, n, {}, {}};
    for (std::size_t s = 0; s < tasks; ++s) {
      r.x.push_back(static_cast<int>(Between(rng, 0, n - 1)));
      r.y.push_back(static_cast<int>(Between(rng, 0, n - 1)));
    }
    const auto [a, b] = UniformAssignment(tasks, rng);
    const PaymentLedger l = PairingPayment(tv, k, r, a, b);
    const double want_a = k(r.x[a.bonus], r.y[a.bonus]) - k(r.x[a.penalty_a], r.y[a.penalty_b]);
    const double want_b = k(r.x[b.bonus], r.y[b.bonus]) - k(r.x[b.penalty_a], r.y[b.penalty_b]);
    if (l.alice != want_a || l.bob != want_b) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in 1000 tuples"};
}

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds; 0 means no limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "grading fixture fidelity", 1, GradingFixture},
      {2, "truthful ideal payment equals mutual information", 5, TruthfulIdentity},
      {3, "universal upper bound", 10, UniversalBound},
      {4, "oblivious profiles pay at most zero", 5, ObliviousNonpositive},
      {5, "permutation equality and strict gap", 0, PermutationCharacterization},
      {6, "Bregman gap identity", 0, BregmanIdentity},
      {7, "variational one-sidedness", 0, VariationalRepresentation},
      {8, "perturbation accuracy bound", 0, TvToAccuracy},
      {9, "exact-frequency generative learning", 0, ExactFrequency},
      {10, "learning consistency", 120, LearningConsistency},
      {11, "Gaussian quadratic ERM", 120, GaussianErm},
      {12, "end-to-end truthfulness with learning", 300, EndToEndTruthfulness},
      {13, "latent-label pairing", 0, LatentPairing},
      {14, "correlated agreement reduction", 0, CorrelatedAgreement},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0 && secs > c.time_limit) {
      o.passed = false;
      o.detail += " [over the " + Num(c.time_limit) + " s limit]";
    }
    failed += !o.passed;
    std::printf("%s criterion %2d  %-48s %8.3f s  %s\n", o.passed ? "PASS" : "FAIL", c.id, c.title, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
