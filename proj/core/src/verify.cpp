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

#include "phimech/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>
#include <utility>

#include "phimech/errors.hpp"
#include "phimech/learning.hpp"
#include "phimech/mechanism.hpp"
#include "phimech/priors.hpp"
#include "phimech/strategies.hpp"

namespace phimech {
namespace {

using Outcome = std::pair<bool, std::string>;

template <typename Body>
PropertyResult Run(std::string name, Body&& body) {
  PropertyResult r;
  r.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  try {
    std::tie(r.passed, r.detail) = body();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string Worst(std::string_view label, double value) {
  std::ostringstream s;
  s << label << ' ' << value;
  return s.str();
}

std::size_t SizeBetween(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Random non-permutation strategy that is not oblivious either.
constexpr double kRelevanceSeparation = 0.05;

Strategy RandomGenericStrategy(std::size_t n, Rng& rng) {
  for (;;) {
    Strategy s = RandomStrategy(n, n, rng);
    if (!IsPermutation(s) && !IsOblivious(s)) return s;
  }
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const Matrix& GradingCounts() {
  static const Matrix counts{{5, 2, 3}, {2, 1, 2}, {3, 2, 5}};
  return counts;
}

// ---- identities ------------------------------------------------------------

Outcome GradingFixture() {
  const FiniteJoint p = GradingJoint();
  const Matrix ratio{{1.25, 1.0, 0.75}, {1.0, 1.0, 1.0}, {0.75, 1.0, 1.25}};
  const Matrix cond{{0.5, 0.2, 0.3}, {0.4, 0.2, 0.4}, {0.3, 0.2, 0.5}};
  const double dr = MaxAbsDiff(RatioMatrix(p), ratio);
  const double dc = std::max(MaxAbsDiff(ConditionalYGivenX(p), cond),
                             MaxAbsDiff(ConditionalXGivenY(p), cond));
  const double det = std::abs(Determinant(p.matrix()));
  const bool flags = IsStochasticRelevant(p) && !IsFineGrained(p) && !IsStrictlyCorrelated(p);
  std::ostringstream s;
  s << "ratio err " << dr << ", conditional err " << dc << ", |det| " << det;
  return {dr <= 1e-12 && dc <= 1e-12 && det <= 1e-12 && flags, s.str()};
}

Outcome TruthfulPaymentEqualsMi(const VerifyOptions& o) {
  Rng rng = MakeRng(DeriveSeed(o.seed, 1));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = SizeBetween(rng, 3, 5);
    const FiniteJoint p = RandomFullSupportJoint(n, SizeBetween(rng, 3, 5), rng);
    for (const auto& gen : ConvexGenerator::All()) {
      const double pay = ExactExAntePayment(gen, o.ideal(gen, p), p, TruthProfile(p.rows(), p.cols()));
      worst = std::max(worst, std::abs(pay - MutualInformation(gen, p)));
    }
  }
  return {worst <= 1e-9, Worst("max |payment - MI|", worst)};
}

Outcome IdealAttainsDivergence(const VerifyOptions& o) {
  Rng rng = MakeRng(DeriveSeed(o.seed, 2));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const FiniteJoint p = RandomFullSupportJoint(SizeBetween(rng, 2, 5), SizeBetween(rng, 2, 5), rng);
    for (const auto& gen : ConvexGenerator::All())
      worst = std::max(worst, std::abs(VariationalValue(gen, o.ideal(gen, p), p) -
                                       MutualInformation(gen, p)));
  }
  return {worst <= 1e-9, Worst("max |variational value - divergence|", worst)};
}

Outcome BregmanIdentity(const VerifyOptions& o) {
  Rng rng = MakeRng(DeriveSeed(o.seed, 3));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const FiniteJoint p = RandomFullSupportJoint(SizeBetween(rng, 2, 5), SizeBetween(rng, 2, 5), rng);
    for (const char* name : {"kl", "chi_squared"}) {
      const auto gen = ConvexGenerator::Catalog(name);
      const Tabular k = RandomTabular(gen, p.rows(), p.cols(), rng);
      const double gap = BregmanGap(gen, k, p);
      const double diff = MutualInformation(gen, p) - VariationalValue(gen, k, p);
      worst = std::max(worst, std::abs(gap - diff));
    }
  }
  return {worst <= 1e-9, Worst("max |gap - (MI - value)|", worst)};
}

Outcome PushforwardPaymentIdentity(const VerifyOptions& o) {
  Rng rng = MakeRng(DeriveSeed(o.seed, 4));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = SizeBetween(rng, 2, 5);
    const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
    const StrategyProfile theta = RandomProfile(n, rng);
    const auto gen = ConvexGenerator::All()[i % 4];
    const Tabular k = RandomTabular(gen, n, n, rng);
    const double direct = ExactExAntePayment(gen, k, p, theta);
    const FiniteJoint pushed = Pushforward(p, theta);
    const double via = ExactExAntePayment(gen, k, pushed, TruthProfile(n, n));
    worst = std::max(worst, std::abs(direct - via));
  }
  return {worst <= 1e-12, Worst("max |u(theta, P, k) - u(truth, theta P, k)|", worst)};
}

Outcome PermutationRelabeling(const VerifyOptions& o) {
  Rng rng = MakeRng(DeriveSeed(o.seed, 5));
  const auto kl = ConvexGenerator::Catalog("kl");
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = SizeBetween(rng, 2, 5);
    const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
    const StrategyProfile pi{RandomPermutation(n, rng), RandomPermutation(n, rng)};
    const Tabular ideal = o.ideal(kl, p);
    // k(pi_A(x), pi_B(y)) = Phi'(ratio(x, y)).
    Tabular k{Matrix(n, n)};
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        std::size_t xr = 0, yr = 0;
        while (pi.alice.matrix()(x, xr) != 1.0) ++xr;
        while (pi.bob.matrix()(y, yr) != 1.0) ++yr;
        k.k(xr, yr) = ideal(x, y);
      }
    worst = std::max(worst, std::abs(ExactExAntePayment(kl, k, p, pi) - MutualInformation(kl, p)));
  }
  return {worst <= 1e-9, Worst("max |payment - MI|", worst)};
}

Outcome CorrelatedAgreementReduction(const VerifyOptions& o) {
  Rng rng = MakeRng(DeriveSeed(o.seed, 6));
  const auto tv = ConvexGenerator::Catalog("total_variation");
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = SizeBetween(rng, 2, 5);
    const Tabular k = RandomTabular(tv, n, n, rng);
    FiniteReports r{n, n, std::vector<int>(6), std::vector<int>(6)};
    for (std::size_t s = 0; s < 6; ++s) {
      r.x[s] = static_cast<int>(SizeBetween(rng, 0, n - 1));
      r.y[s] = static_cast<int>(SizeBetween(rng, 0, n - 1));
    }
    const auto [a, b] = UniformAssignment(6, rng);
    const PaymentLedger l = PairingPayment(tv, k, r, a, b);
    const double ea = k(r.x[a.bonus], r.y[a.bonus]) - k(r.x[a.penalty_a], r.y[a.penalty_b]);
    const double eb = k(r.x[b.bonus], r.y[b.bonus]) - k(r.x[b.penalty_a], r.y[b.penalty_b]);
    if (l.alice != ea || l.bob != eb) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in 1000 tuples"};
}

// ---- bounds ----------------------------------------------------------------

Outcome UniversalUpperBound(const VerifyOptions& o) {
  Rng rng = MakeRng(DeriveSeed(o.seed, 11));
  int violations = 0;
  double worst = -1e300;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = SizeBetween(rng, 3, 5);
    const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
    const auto gen = ConvexGenerator::All()[i % 4];
    const StrategyProfile theta = RandomProfile(n, rng);
    const Tabular k = std::get<Tabular>(ClampToDomain(gen, RandomTabular(gen, n, n, rng)));
    const double excess = ExactExAntePayment(gen, k, p, theta) - MutualInformation(gen, p);
    worst = std::max(worst, excess);
    if (excess > 1e-9) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " violations; max payment - MI " +
                               Worst("", worst)};
}

Outcome ObliviousNonpositive(const VerifyOptions& o) {
  Rng rng = MakeRng(DeriveSeed(o.seed, 12));
  double worst = -1e300;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = SizeBetween(rng, 2, 5);
    const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
    const auto gen = ConvexGenerator::All()[i % 4];
    StrategyProfile theta{RandomOblivious(n, n, rng), RandomStrategy(n, n, rng)};
    if (i % 3 == 1) std::swap(theta.alice, theta.bob);
    if (i % 3 == 2) theta.bob = RandomOblivious(n, n, rng);
    const Tabular k = RandomTabular(gen, n, n, rng);
    worst = std::max(worst, ExactExAntePayment(gen, k, p, theta));
  }
  return {worst <= 1e-9, Worst("max payment", worst)};
}

Outcome NonPermutationStrictGap(const VerifyOptions& o) {
  Rng rng = MakeRng(DeriveSeed(o.seed, 13));
  const auto kl = ConvexGenerator::Catalog("kl");
  double smallest = 1e300;
  int tested = 0;
  while (tested < 200) {
    const std::size_t n = SizeBetween(rng, 2, 5);
    const FiniteJoint p = RandomFullSupportJoint(n, n, rng);
    // A nearly independent prior is relevant only up to rounding, and its whole
    // mutual information can sit below the margin being tested.
    if (!IsStochasticRelevant(p, kRelevanceSeparation)) continue;
    const StrategyProfile theta{RandomGenericStrategy(n, rng), RandomGenericStrategy(n, rng)};
    const double gap = MutualInformation(kl, p) - FantasyPayment(kl, p, theta).value;
    smallest = std::min(smallest, gap);
    ++tested;
  }
  return {smallest > 1e-6, Worst("min MI - fantasy payment", smallest)};
}

Outcome VariationalOneSided(const VerifyOptions& o) {
  Rng rng = MakeRng(DeriveSeed(o.seed, 14));
  double worst = -1e300;
  for (int i = 0; i < 1000; ++i) {
    const FiniteJoint p = RandomFullSupportJoint(SizeBetween(rng, 2, 5), SizeBetween(rng, 2, 5), rng);
    const auto gen = ConvexGenerator::All()[i % 4];
    const Tabular k = RandomTabular(gen, p.rows(), p.cols(), rng);
    worst = std::max(worst, VariationalValue(gen, k, p) - MutualInformation(gen, p));
  }
  return {worst <= 1e-9, Worst("max value - divergence", worst)};
}

Outcome DataProcessing(const VerifyOptions& o) {
  Rng rng = MakeRng(DeriveSeed(o.seed, 15));
  double worst = -1e300;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = SizeBetween(rng, 2, 8);
    const std::size_t out = SizeBetween(rng, 2, 8);
    const FiniteDistribution p(SampleSimplex(n, rng));
    const FiniteDistribution q(SampleSimplex(n, rng));
    const Matrix channel = RandomStrategy(n, out, rng).matrix();
    std::vector<double> pc(out, 0.0), qc(out, 0.0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < out; ++b) {
        pc[b] += p[a] * channel(a, b);
        qc[b] += q[a] * channel(a, b);
      }
    const double sp = std::accumulate(pc.begin(), pc.end(), 0.0);
    const double sq = std::accumulate(qc.begin(), qc.end(), 0.0);
    for (double& v : pc) v /= sp;
    for (double& v : qc) v /= sq;
    for (const auto& gen : ConvexGenerator::All())
      worst = std::max(worst, Divergence(gen, FiniteDistribution(pc), FiniteDistribution(qc)) -
                                  Divergence(gen, p, q));
  }
  return {worst <= 1e-9, Worst("max D(after) - D(before)", worst)};
}

Outcome TvAccuracyBound(const VerifyOptions& o) {
  Rng rng = MakeRng(DeriveSeed(o.seed, 16));
  int failures = 0;
  double tightest = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = SizeBetween(rng, 2, 4);
    const std::size_t cells = n * n;
    // Mixing with the uniform keeps every cell above 1 / (2 cells) > 2 alpha.
    const auto w = SampleSimplex(cells, rng);
    Matrix pm(n, n);
    for (std::size_t c = 0; c < cells; ++c) pm.flat()[c] = 0.5 * w[c] + 0.5 / cells;
    const FiniteJoint p(pm);
    const double alpha = 0.2 / cells;
    const double delta = std::uniform_real_distribution<double>(0.0, 0.9 * alpha)(rng);
    const std::size_t from = SizeBetween(rng, 0, cells - 1);
    std::size_t to = SizeBetween(rng, 0, cells - 2);
    if (to >= from) ++to;
    Matrix qm = pm;
    qm.flat()[from] -= 0.5 * delta;
    qm.flat()[to] += 0.5 * delta;
    const auto gen = ConvexGenerator::All()[i % 4];
    const double c_l = gen.LipschitzConstant(alpha, 1.0 / alpha);
    const TvBoundCheck check = CheckTvAccuracyBound(gen, p, FiniteJoint(qm), alpha, c_l);
    if (!check.holds) ++failures;
    tightest = std::max(tightest, check.bound > 0 ? check.accuracy / check.bound : 0.0);
  }
  return {failures == 0, std::to_string(failures) + " failures; max accuracy / bound " +
                             Worst("", tightest)};
}

// ---- learning --------------------------------------------------------------

Outcome ExactFrequencyGenerative(const VerifyOptions& o) {
  const FiniteReports r = ReportsWithCounts(GradingCounts());
  int mismatched = 0;
  for (const auto& gen : ConvexGenerator::All())
    if (!(LearnGenerative(gen, r).k == o.ideal(gen, GradingJoint()).k)) ++mismatched;
  return {mismatched == 0, std::to_string(mismatched) + " generators differ bitwise"};
}

Outcome ExactFrequencyErm(const VerifyOptions& o) {
  FiniteReports r = ReportsWithCounts(GradingCounts());
  const FiniteReports once = r;
  for (int copy = 0; copy < 2; ++copy) {
    r.x.insert(r.x.end(), once.x.begin(), once.x.end());
    r.y.insert(r.y.end(), once.y.begin(), once.y.end());
  }
  LearnerConfig cfg;
  cfg.method = LearnerMethod::kErm;
  double worst = 0.0;
  for (const auto& gen : ConvexGenerator::All()) {
    const Tabular k = std::get<Tabular>(LearnErm(gen, r, cfg).scorer);
    worst = std::max(worst, MaxAbsDiff(k.k, o.ideal(gen, GradingJoint()).k));
  }
  return {worst <= 1e-12, Worst("max |erm - ideal|", worst)};
}

Outcome LearnerConsistency(const VerifyOptions& o, LearnerMethod method, std::uint64_t stream) {
  const auto kl = ConvexGenerator::Catalog("kl");
  const FiniteJoint p = GradingJoint();
  LearnerConfig cfg;
  cfg.method = method;
  const FiniteLearner learn = MakeFiniteLearner(kl, cfg);
  std::vector<double> medians;
  double lowest = 1e300;
  for (std::size_t m : {1000u, 10000u, 100000u}) {
    std::vector<double> acc;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng = MakeRng(DeriveSeed(DeriveSeed(o.seed, stream), seed * 7 + m));
      const auto k = std::get<Tabular>(learn(SampleTasks(p, m, rng)));
      acc.push_back(Accuracy(kl, k, p));
      lowest = std::min(lowest, acc.back());
    }
    medians.push_back(Median(acc));
  }
  const bool monotone = medians[1] <= medians[0] && medians[2] <= medians[1];
  std::ostringstream s;
  s << "median accuracy " << medians[0] << ", " << medians[1] << ", " << medians[2]
    << "; min accuracy " << lowest;
  return {monotone && medians[2] < 1e-2 && lowest >= -1e-9, s.str()};
}

Outcome GaussianErm(const VerifyOptions& o) {
  const auto kl = ConvexGenerator::Catalog("kl");
  const GaussianJoint g(0.0, 1.0, 4.0);
  LearnerConfig cfg;
  cfg.method = LearnerMethod::kErm;
  cfg.function_class = FunctionClass::kQuadratic;
  std::vector<double> values;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Rng rng = MakeRng(DeriveSeed(DeriveSeed(o.seed, 31), seed));
    const ErmResult fit = LearnErm(kl, SampleTasks(g, 30000, rng), cfg);
    values.push_back(VariationalValue(kl, fit.scorer, g, 0, rng).value);
  }
  const double med = Median(values);
  const double mi = MutualInformation(kl, g);
  return {std::abs(med - mi) <= 0.01,
          Worst("median variational value", med) + Worst(" vs mutual information", mi)};
}

}  // namespace

bool SuiteReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

SuiteReport RunIdentitiesSuite(const VerifyOptions& o) {
  SuiteReport s{"identities", {}};
  s.results.push_back(Run("grading_fixture", GradingFixture));
  s.results.push_back(Run("truthful_payment_equals_mutual_information",
                          [&] { return TruthfulPaymentEqualsMi(o); }));
  s.results.push_back(Run("ideal_attains_divergence", [&] { return IdealAttainsDivergence(o); }));
  s.results.push_back(Run("bregman_gap_identity", [&] { return BregmanIdentity(o); }));
  s.results.push_back(Run("pushforward_payment_identity",
                          [&] { return PushforwardPaymentIdentity(o); }));
  s.results.push_back(Run("permutation_relabeling", [&] { return PermutationRelabeling(o); }));
  s.results.push_back(Run("correlated_agreement_reduction",
                          [&] { return CorrelatedAgreementReduction(o); }));
  return s;
}

SuiteReport RunBoundsSuite(const VerifyOptions& o) {
  SuiteReport s{"bounds", {}};
  s.results.push_back(Run("universal_upper_bound", [&] { return UniversalUpperBound(o); }));
  s.results.push_back(Run("oblivious_nonpositive", [&] { return ObliviousNonpositive(o); }));
  s.results.push_back(Run("non_permutation_strict_gap", [&] { return NonPermutationStrictGap(o); }));
  s.results.push_back(Run("variational_one_sided", [&] { return VariationalOneSided(o); }));
  s.results.push_back(Run("data_processing", [&] { return DataProcessing(o); }));
  s.results.push_back(Run("tv_accuracy_bound", [&] { return TvAccuracyBound(o); }));
  return s;
}

SuiteReport RunLearningSuite(const VerifyOptions& o) {
  SuiteReport s{"learning", {}};
  s.results.push_back(Run("exact_frequency_generative", [&] { return ExactFrequencyGenerative(o); }));
  s.results.push_back(Run("exact_frequency_erm", [&] { return ExactFrequencyErm(o); }));
  s.results.push_back(Run("generative_consistency",
                          [&] { return LearnerConsistency(o, LearnerMethod::kGenerative, 21); }));
  s.results.push_back(
      Run("erm_consistency", [&] { return LearnerConsistency(o, LearnerMethod::kErm, 22); }));
  s.results.push_back(Run("gaussian_erm", [&] { return GaussianErm(o); }));
  return s;
}

SuiteReport RunSuite(std::string_view name, const VerifyOptions& options) {
  if (name == "identities") return RunIdentitiesSuite(options);
  if (name == "bounds") return RunBoundsSuite(options);
  if (name == "learning") return RunLearningSuite(options);
  throw InvalidInput("unknown verify suite '" + std::string(name) +
                     "' (expected identities, bounds or learning)");
}

std::vector<std::string> SuiteNames() { return {"identities", "bounds", "learning"}; }

}  // namespace phimech
