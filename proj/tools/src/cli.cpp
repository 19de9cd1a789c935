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

#include "phimech_cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phimech/divergence.hpp"
#include "phimech/errors.hpp"
#include "phimech/io.hpp"
#include "phimech/learning.hpp"
#include "phimech/mechanism.hpp"
#include "phimech/priors.hpp"
#include "phimech/scoring.hpp"
#include "phimech/strategies.hpp"
#include "phimech/verify.hpp"

namespace phimech::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum class Format { kCsv, kJson };

struct Flags {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  Format format = Format::kCsv;
  std::string suite;
};

// ---- config interpretation -------------------------------------------------

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) items.push_back(item.substr(b, e - b + 1));
  }
  return items;
}

std::vector<double> DoubleList(const std::string& text, std::string_view what) {
  std::vector<double> v;
  for (const auto& s : SplitList(text)) v.push_back(ParseDouble(s, what));
  return v;
}

std::vector<int> IntList(const std::string& text, std::string_view what) {
  std::vector<int> v;
  for (const auto& s : SplitList(text)) {
    const double d = ParseDouble(s, what);
    if (d != static_cast<int>(d)) throw InvalidInput("'" + std::string(what) + "' needs integers");
    v.push_back(static_cast<int>(d));
  }
  return v;
}

struct Prior {
  std::variant<FiniteJoint, GaussianJoint, DawidSkeneModel> model;
};

struct RunConfig {
  Config raw;
  fs::path base_dir;
  std::uint64_t seed = 0;
};

std::string ResolvePath(const RunConfig& rc, const std::string& path) {
  const fs::path p(path);
  return (p.is_absolute() ? p : rc.base_dir / p).string();
}

DawidSkeneModel LoadDawidSkene(const Config& cfg) {
  const std::size_t labels = cfg.GetUnsigned("prior", "labels", 2);
  const std::size_t agents = cfg.GetUnsigned("prior", "agents", 10);
  if (labels < 2) throw InvalidInput("prior.labels must be at least 2");
  std::vector<double> prior(labels, 1.0 / static_cast<double>(labels));
  if (cfg.Has("prior", "class_prior")) prior = DoubleList(cfg.GetString("prior", "class_prior"), "prior.class_prior");
  std::vector<double> acc(agents, cfg.GetDouble("prior", "accuracy", 0.8));
  if (cfg.Has("prior", "accuracies")) acc = DoubleList(cfg.GetString("prior", "accuracies"), "prior.accuracies");
  if (acc.size() != agents) throw InvalidInput("prior.accuracies needs one entry per agent");
  std::vector<Matrix> confusion;
  for (double a : acc) {
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidInput("agent accuracy must lie in [0, 1]");
    Matrix c(labels, labels, (1.0 - a) / static_cast<double>(labels - 1));
    for (std::size_t z = 0; z < labels; ++z) c(z, z) = a;
    confusion.push_back(std::move(c));
  }
  return DawidSkeneModel(FiniteDistribution(prior), std::move(confusion));
}

Prior LoadPrior(const RunConfig& rc) {
  const Config& cfg = rc.raw;
  const std::string type = cfg.GetString("prior", "type", "builtin");
  if (type == "builtin") {
    const std::string name = cfg.GetString("prior", "name", "grading");
    if (name == "grading") return {GradingJoint()};
    if (name == "independent") {
      const auto u = FiniteDistribution::Uniform(3);
      return {IndependentJoint(u, u)};
    }
    throw InvalidInput("unknown builtin prior '" + name + "' (expected grading or independent)");
  }
  if (type == "matrix") return {FiniteJoint(ReadMatrixFile(ResolvePath(rc, cfg.GetString("prior", "path"))))};
  if (type == "gaussian") return {GaussianFromKeyValues(cfg.Section("prior"))};
  if (type == "dawid_skene") return {LoadDawidSkene(cfg)};
  throw InvalidInput("unknown prior type '" + type +
                     "' (expected builtin, matrix, gaussian or dawid_skene)");
}

Strategy LoadFiniteStrategy(const RunConfig& rc, const std::string& section, std::size_t n,
                            std::uint64_t stream) {
  const Config& cfg = rc.raw;
  const std::string kind = cfg.GetString(section, "kind", "truth");
  if (kind == "truth") return TruthTelling(n);
  if (kind == "permutation") {
    const auto perm = IntList(cfg.GetString(section, "perm"), section + ".perm");
    if (perm.size() != n) throw InvalidInput(section + ".perm must have one entry per signal");
    return Permutation(perm);
  }
  if (kind == "oblivious") {
    const auto dist = cfg.Has(section, "dist")
                          ? FiniteDistribution(DoubleList(cfg.GetString(section, "dist"), section + ".dist"))
                          : FiniteDistribution::Uniform(n);
    return Oblivious(dist, n);
  }
  if (kind == "random") {
    Rng rng = MakeRng(DeriveSeed(rc.seed, stream));
    return RandomStrategy(n, n, rng);
  }
  if (kind == "matrix") {
    Strategy s(ReadMatrixFile(ResolvePath(rc, cfg.GetString(section, "path"))));
    if (s.n_signals() != n) throw InvalidInput(section + ": strategy matrix has the wrong number of rows");
    return s;
  }
  throw InvalidInput("unknown strategy kind '" + kind + "' in [" + section +
                     "] (expected truth, permutation, oblivious, random or matrix)");
}

Strategy LoadRealStrategy(const RunConfig& rc, const std::string& section) {
  if (!rc.raw.HasSection(section)) return Strategy(RealMap::Identity());
  KeyValues kv = rc.raw.Section(section);
  if (kv.count("kind") && kv["kind"] == "truth") kv["kind"] = "identity";
  return Strategy(RealMapFromKeyValues(kv));
}

StrategyProfile LoadFiniteProfile(const RunConfig& rc, std::size_t nx, std::size_t ny) {
  return {LoadFiniteStrategy(rc, "strategy.alice", nx, 1001),
          LoadFiniteStrategy(rc, "strategy.bob", ny, 1002)};
}

std::vector<ConvexGenerator> LoadGenerators(const Config& cfg, bool gaussian) {
  std::vector<ConvexGenerator> gens;
  if (cfg.Has("", "generators")) {
    for (const auto& name : SplitList(cfg.GetString("", "generators")))
      gens.push_back(ConvexGenerator::Catalog(name));
  } else if (cfg.Has("", "generator")) {
    gens.push_back(ConvexGenerator::Catalog(cfg.GetString("", "generator")));
  } else if (gaussian) {
    gens.push_back(ConvexGenerator::Catalog("kl"));
  } else {
    const auto all = ConvexGenerator::All();
    gens.assign(all.begin(), all.end());
  }
  if (gens.empty()) throw InvalidInput("no generator configured");
  return gens;
}

ConvexGenerator LoadGenerator(const Config& cfg) {
  return ConvexGenerator::Catalog(cfg.GetString("", "generator", "kl"));
}

// nullopt means "use the prior's ideal scorer".
std::optional<LearnerConfig> LoadLearner(const Config& cfg) {
  const std::string method = cfg.GetString("learner", "method", "ideal");
  if (method == "ideal") return std::nullopt;
  LearnerConfig lc;
  if (method == "generative") {
    lc.method = LearnerMethod::kGenerative;
  } else if (method == "erm") {
    lc.method = LearnerMethod::kErm;
  } else {
    throw InvalidInput("unknown learner.method '" + method + "' (expected ideal, generative or erm)");
  }
  const std::string cls = cfg.GetString("learner", "class", "tabular");
  if (cls == "tabular") {
    lc.function_class = FunctionClass::kTabular;
  } else if (cls == "quadratic") {
    lc.function_class = FunctionClass::kQuadratic;
  } else {
    throw InvalidInput("unknown learner.class '" + cls + "' (expected tabular or quadratic)");
  }
  lc.solver.step_size = cfg.GetDouble("learner", "step_size", lc.solver.step_size);
  lc.solver.max_iters = cfg.GetUnsigned("learner", "max_iters", lc.solver.max_iters);
  lc.solver.grad_tol = cfg.GetDouble("learner", "grad_tol", lc.solver.grad_tol);
  lc.solver.coefficient_bound =
      cfg.GetDouble("learner", "coefficient_bound", lc.solver.coefficient_bound);
  lc.split_seed = cfg.GetUnsigned("learner", "split_seed", 0);
  lc.Validate();
  return lc;
}

PaymentOptions LoadPaymentOptions(const Config& cfg) {
  PaymentOptions o;
  const std::string est = cfg.GetString("run", "estimator", "single");
  if (est == "single") {
    o.estimator = PaymentEstimator::kSingle;
  } else if (est == "task_average") {
    o.estimator = PaymentEstimator::kTaskAverage;
  } else if (est == "conditional") {
    o.estimator = PaymentEstimator::kConditional;
  } else {
    throw InvalidInput("unknown run.estimator '" + est +
                       "' (expected single, task_average or conditional)");
  }
  const std::string assign = cfg.GetString("run", "assignment", "round_robin");
  if (assign == "round_robin") {
    o.assignment = AssignmentMode::kRoundRobin;
  } else if (assign == "uniform") {
    o.assignment = AssignmentMode::kUniform;
  } else {
    throw InvalidInput("unknown run.assignment '" + assign + "' (expected round_robin or uniform)");
  }
  return o;
}

struct RunSizes {
  std::size_t m = 0;
  std::size_t m_learn = 0;
  std::size_t replicates = 0;
};

RunSizes LoadSizes(const Config& cfg, bool learning) {
  RunSizes s;
  s.m = cfg.GetUnsigned("run", "m", 2000);
  s.m_learn = learning ? cfg.GetUnsigned("run", "m_learn", s.m / 2) : 0;
  s.replicates = cfg.GetUnsigned("run", "replicates", 20);
  if (s.replicates < 1) throw InvalidInput("run.replicates must be at least 1");
  if (s.m < s.m_learn + 2)
    throw InvalidInput("run.m must be at least run.m_learn + 2 (" + std::to_string(s.m_learn + 2) + ")");
  return s;
}

// ---- output ----------------------------------------------------------------

json ConfigEcho(const Config& cfg) {
  json j = json::object();
  for (const auto& [section, kv] : cfg.sections()) {
    if (kv.empty()) continue;
    json& dst = section.empty() ? j : j[section];
    for (const auto& [k, v] : kv) dst[k] = v;
  }
  return j;
}

json Envelope(const std::string& command, const RunConfig& rc) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"seed", rc.seed},
          {"config", ConfigEcho(rc.raw)}};
}

void Emit(const Flags& flags, const std::string& file, const std::string& text, std::ostream& out) {
  out << text;
  if (flags.out_dir.empty()) return;
  std::error_code ec;
  fs::create_directories(flags.out_dir, ec);
  const fs::path path = fs::path(flags.out_dir) / file;
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write '" + path.string() + "'");
  f << text;
}

void EmitFile(const Flags& flags, const std::string& file, const std::string& text) {
  if (flags.out_dir.empty()) return;
  std::error_code ec;
  fs::create_directories(flags.out_dir, ec);
  const fs::path path = fs::path(flags.out_dir) / file;
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write '" + path.string() + "'");
  f << text;
}

json ScorerJson(const ScoringFunction& k) {
  if (const auto* t = std::get_if<Tabular>(&k)) {
    json rows = json::array();
    for (std::size_t x = 0; x < t->k.rows(); ++x)
      rows.push_back(std::vector<double>(t->k.row(x).begin(), t->k.row(x).end()));
    return {{"form", "tabular"}, {"table", rows}};
  }
  json j = json::object();
  const KeyValues kv = std::holds_alternative<Quadratic>(k)
                           ? ToKeyValues(std::get<Quadratic>(k))
                           : ToKeyValues(std::get<EllipseThreshold>(k));
  for (const auto& [key, v] : kv) j[key] = key == "form" ? json(v) : json(ParseDouble(v, key));
  return j;
}

std::string ScorerCsv(const ScoringFunction& k) {
  std::ostringstream s;
  if (const auto* t = std::get_if<Tabular>(&k)) {
    s << "x,y,score\n";
    for (std::size_t x = 0; x < t->k.rows(); ++x)
      for (std::size_t y = 0; y < t->k.cols(); ++y)
        s << x << ',' << y << ',' << FormatFixed(t->k(x, y)) << '\n';
    return s.str();
  }
  const KeyValues kv = std::holds_alternative<Quadratic>(k)
                           ? ToKeyValues(std::get<Quadratic>(k))
                           : ToKeyValues(std::get<EllipseThreshold>(k));
  s << "parameter,value\n";
  for (const auto& [key, v] : kv)
    if (key != "form") s << key << ',' << FormatFixed(ParseDouble(v, key)) << '\n';
  return s.str();
}

// ---- commands --------------------------------------------------------------

int CmdDivergence(const Flags& flags, const RunConfig& rc, std::ostream& out) {
  const Prior prior = LoadPrior(rc);
  const bool gaussian = std::holds_alternative<GaussianJoint>(prior.model);
  if (std::holds_alternative<DawidSkeneModel>(prior.model))
    throw InvalidInput("divergence needs a finite or Gaussian prior");
  json rows = json::array();
  std::ostringstream csv;
  csv << "generator,mutual_information\n";
  for (const auto& gen : LoadGenerators(rc.raw, gaussian)) {
    const double mi = gaussian ? MutualInformation(gen, std::get<GaussianJoint>(prior.model))
                               : MutualInformation(gen, std::get<FiniteJoint>(prior.model));
    csv << gen.name() << ',' << FormatFixed(mi) << '\n';
    rows.push_back({{"generator", gen.name()}, {"mutual_information", mi}});
  }
  json doc = Envelope("divergence", rc);
  doc["results"] = rows;
  if (flags.format == Format::kCsv) {
    Emit(flags, "divergence.csv", csv.str(), out);
    EmitFile(flags, "divergence.json", doc.dump(2) + "\n");
  } else {
    Emit(flags, "divergence.json", doc.dump(2) + "\n", out);
    EmitFile(flags, "divergence.csv", csv.str());
  }
  return kExitOk;
}

int CmdIdeal(const Flags& flags, const RunConfig& rc, std::ostream& out) {
  const Prior prior = LoadPrior(rc);
  const ConvexGenerator gen = LoadGenerator(rc.raw);
  ScoringFunction k;
  if (const auto* g = std::get_if<GaussianJoint>(&prior.model)) {
    k = IdealGaussian(gen, *g);
  } else if (const auto* p = std::get_if<FiniteJoint>(&prior.model)) {
    k = IdealFinite(gen, *p);
  } else {
    throw InvalidInput("ideal needs a finite or Gaussian prior");
  }
  json doc = Envelope("ideal", rc);
  doc["results"] = {{"generator", gen.name()}, {"scorer", ScorerJson(k)}};
  if (flags.format == Format::kCsv) {
    Emit(flags, "ideal.csv", ScorerCsv(k), out);
    EmitFile(flags, "ideal.json", doc.dump(2) + "\n");
  } else {
    Emit(flags, "ideal.json", doc.dump(2) + "\n", out);
    EmitFile(flags, "ideal.csv", ScorerCsv(k));
  }
  return kExitOk;
}

// Per-replicate payments keyed by agent id.
struct Payments {
  std::vector<std::size_t> agents;
  std::vector<std::vector<double>> per_agent;  // [agent slot][replicate]
};

Payments SimulateFinite(const RunConfig& rc, const FiniteJoint& p, const ConvexGenerator& gen) {
  const auto learner_cfg = LoadLearner(rc.raw);
  const RunSizes sizes = LoadSizes(rc.raw, learner_cfg.has_value());
  const PaymentOptions options = LoadPaymentOptions(rc.raw);
  const StrategyProfile profile = LoadFiniteProfile(rc, p.rows(), p.cols());
  ExperimentReport report;
  if (!learner_cfg) {
    report = MonteCarloPayment(gen, IdealFinite(gen, p), p, profile, sizes.m, sizes.replicates,
                               rc.seed, options);
  } else {
    report = SimulateMechanism(gen, MakeFiniteLearner(gen, *learner_cfg), p, profile, sizes.m,
                               sizes.m_learn, sizes.replicates, rc.seed, options);
  }
  return {{0, 1}, {report.alice, report.bob}};
}

Payments SimulateGaussian(const RunConfig& rc, const GaussianJoint& g, const ConvexGenerator& gen) {
  const auto learner_cfg = LoadLearner(rc.raw);
  const RunSizes sizes = LoadSizes(rc.raw, learner_cfg.has_value());
  const PaymentOptions options = LoadPaymentOptions(rc.raw);
  if (options.estimator == PaymentEstimator::kConditional)
    throw InvalidInput("the conditional estimator needs a finite prior");
  const StrategyProfile profile{LoadRealStrategy(rc, "strategy.alice"),
                                LoadRealStrategy(rc, "strategy.bob")};
  if (!learner_cfg) {
    const ExperimentReport r = MonteCarloPayment(gen, IdealGaussian(gen, g), g, profile, sizes.m,
                                                 sizes.replicates, rc.seed, options);
    return {{0, 1}, {r.alice, r.bob}};
  }
  const RealLearner learner = MakeRealLearner(gen, *learner_cfg);
  Payments pay{{0, 1}, {{}, {}}};
  for (std::size_t r = 0; r < sizes.replicates; ++r) {
    Rng rng = MakeRng(DeriveSeed(rc.seed, r));
    const RealReports reports = Apply(profile, SampleTasks(g, sizes.m, rng));
    const MechanismRun run = RunMechanism(gen, learner, reports, sizes.m_learn, rng, options);
    pay.per_agent[0].push_back(run.ledger.alice);
    pay.per_agent[1].push_back(run.ledger.bob);
  }
  return pay;
}

Payments SimulateCrowd(const RunConfig& rc, const DawidSkeneModel& model, const ConvexGenerator& gen) {
  auto learner_cfg = LoadLearner(rc.raw);
  if (!learner_cfg) learner_cfg = LearnerConfig{};  // the latent prior is not known to the mechanism
  const RunSizes sizes = LoadSizes(rc.raw, true);
  const PaymentOptions options = LoadPaymentOptions(rc.raw);
  if (options.estimator == PaymentEstimator::kConditional)
    throw InvalidInput("the conditional estimator is not available for crowds");
  const std::size_t target = rc.raw.GetUnsigned("run", "agent", 0);
  if (target >= model.n_agents()) throw InvalidInput("run.agent is out of range");
  const std::string pairing = rc.raw.GetString("run", "pairing", "latent");
  if (pairing != "latent" && pairing != "random")
    throw InvalidInput("unknown run.pairing '" + pairing + "' (expected latent or random)");
  const std::size_t n = model.n_reports();
  const Strategy strategy = LoadFiniteStrategy(rc, "strategy.alice", n, 1001);
  const FiniteLearner learner = MakeFiniteLearner(gen, *learner_cfg);

  Payments pay;
  if (pairing == "latent") {
    pay.agents = {target};
  } else {
    for (std::size_t i = 0; i < model.n_agents(); ++i) pay.agents.push_back(i);
  }
  pay.per_agent.resize(pay.agents.size());
  for (std::size_t r = 0; r < sizes.replicates; ++r) {
    Rng rng = MakeRng(DeriveSeed(rc.seed, r));
    const CrowdSample sample = SampleTasks(model, sizes.m, rng);
    CrowdReports crowd{n, sample.reports};
    const FiniteReports own{n, n, crowd.reports[target], crowd.reports[target]};
    crowd.reports[target] = Apply({strategy, TruthTelling(n)}, own, rng).x;
    if (pairing == "latent") {
      const MechanismRun run =
          MultiAgentLatentPairing(gen, learner, crowd, target, sizes.m_learn, rng, PluralityVote, options);
      pay.per_agent[0].push_back(run.ledger.alice);
    } else {
      for (const AgentPayment& a : MultiAgentRandomPairing(gen, learner, crowd, sizes.m_learn, rng, options))
        pay.per_agent[a.agent].push_back(a.ledger.alice);
    }
  }
  return pay;
}

int CmdSimulate(const Flags& flags, const RunConfig& rc, std::ostream& out) {
  const Prior prior = LoadPrior(rc);
  const ConvexGenerator gen = LoadGenerator(rc.raw);
  Payments pay;
  if (const auto* p = std::get_if<FiniteJoint>(&prior.model)) {
    pay = SimulateFinite(rc, *p, gen);
  } else if (const auto* g = std::get_if<GaussianJoint>(&prior.model)) {
    pay = SimulateGaussian(rc, *g, gen);
  } else {
    pay = SimulateCrowd(rc, std::get<DawidSkeneModel>(prior.model), gen);
  }
  // Optional affine rescaling for budget normalization; off unless configured.
  const double scale = rc.raw.GetDouble("run", "payment_scale", 1.0);
  const double offset = rc.raw.GetDouble("run", "payment_offset", 0.0);
  if (!(scale > 0.0)) throw InvalidInput("run.payment_scale must be positive");
  if (scale != 1.0 || offset != 0.0)
    for (auto& series : pay.per_agent)
      for (double& v : series) v = scale * v + offset;

  std::ostringstream csv;
  csv << "replicate,agent,payment\n";
  const std::size_t reps = pay.per_agent.front().size();
  for (std::size_t r = 0; r < reps; ++r)
    for (std::size_t a = 0; a < pay.agents.size(); ++a)
      csv << r << ',' << pay.agents[a] << ',' << FormatFixed(pay.per_agent[a][r]) << '\n';

  json agents = json::array();
  for (std::size_t a = 0; a < pay.agents.size(); ++a) {
    const auto [mean, se] = MeanAndStandardError(pay.per_agent[a]);
    agents.push_back({{"agent", pay.agents[a]}, {"mean", mean}, {"standard_error", se}});
  }
  json doc = Envelope("simulate", rc);
  doc["results"] = {{"replicates", reps}, {"generator", gen.name()}, {"agents", agents}};
  if (flags.format == Format::kCsv) {
    Emit(flags, "payments.csv", csv.str(), out);
    EmitFile(flags, "summary.json", doc.dump(2) + "\n");
  } else {
    Emit(flags, "summary.json", doc.dump(2) + "\n", out);
    EmitFile(flags, "payments.csv", csv.str());
  }
  return kExitOk;
}

int CmdLearn(const Flags& flags, const RunConfig& rc, std::ostream& out) {
  const Prior prior = LoadPrior(rc);
  const ConvexGenerator gen = LoadGenerator(rc.raw);
  auto learner_cfg = LoadLearner(rc.raw);
  if (!learner_cfg) throw InvalidInput("learn needs learner.method = generative or erm");
  const std::size_t m_learn = rc.raw.GetUnsigned("run", "m_learn", rc.raw.GetUnsigned("run", "m", 10000));
  if (m_learn < 1) throw InvalidInput("run.m_learn must be at least 1");
  Rng rng = MakeRng(DeriveSeed(rc.seed, 0));

  ScoringFunction k;
  double accuracy = 0.0, accuracy_se = 0.0, mi = 0.0;
  if (const auto* p = std::get_if<FiniteJoint>(&prior.model)) {
    FiniteReports reports;
    if (rc.raw.Has("data", "reports")) {
      const std::string path = ResolvePath(rc, rc.raw.GetString("data", "reports"));
      std::ifstream in(path);
      if (!in) throw InvalidInput("cannot open reports file '" + path + "'");
      const CrowdReports crowd = ReadReportsCsv(in, std::max(p->rows(), p->cols()));
      if (crowd.n_agents() != 2) throw InvalidInput(path + ": expected reports from two agents");
      reports = FiniteReports{p->rows(), p->cols(), crowd.reports[0], crowd.reports[1]};
    } else {
      reports = Apply(LoadFiniteProfile(rc, p->rows(), p->cols()), SampleTasks(*p, m_learn, rng), rng);
    }
    k = MakeFiniteLearner(gen, *learner_cfg)(reports);
    mi = MutualInformation(gen, *p);
    accuracy = Accuracy(gen, std::get<Tabular>(k), *p);
  } else if (const auto* g = std::get_if<GaussianJoint>(&prior.model)) {
    const StrategyProfile profile{LoadRealStrategy(rc, "strategy.alice"),
                                  LoadRealStrategy(rc, "strategy.bob")};
    k = MakeRealLearner(gen, *learner_cfg)(Apply(profile, SampleTasks(*g, m_learn, rng)));
    const Estimate e = Accuracy(gen, k, *g, rc.raw.GetUnsigned("run", "draws", 1000000), rng);
    accuracy = e.value;
    accuracy_se = e.standard_error;
    if (gen.kind() == GeneratorKind::kKl) mi = MutualInformation(gen, *g);
  } else {
    throw InvalidInput("learn needs a finite or Gaussian prior");
  }

  json doc = Envelope("learn", rc);
  doc["results"] = {{"generator", gen.name()},
                    {"m_learn", m_learn},
                    {"scorer", ScorerJson(k)},
                    {"accuracy", accuracy},
                    {"accuracy_standard_error", accuracy_se},
                    {"mutual_information", mi}};
  std::ostringstream csv;
  csv << ScorerCsv(k) << "\nmetric,value\naccuracy," << FormatFixed(accuracy)
      << "\nmutual_information," << FormatFixed(mi) << '\n';
  if (flags.format == Format::kCsv) {
    Emit(flags, "learned.csv", csv.str(), out);
    EmitFile(flags, "learned.json", doc.dump(2) + "\n");
  } else {
    Emit(flags, "learned.json", doc.dump(2) + "\n", out);
    EmitFile(flags, "learned.csv", csv.str());
  }
  return kExitOk;
}

int CmdVerify(const Flags& flags, std::ostream& out, std::ostream& err) {
  VerifyOptions options;
  if (flags.seed) options.seed = *flags.seed;
  std::vector<std::string> suites;
  if (flags.suite.empty() || flags.suite == "all") {
    suites = SuiteNames();
  } else {
    suites = {flags.suite};
  }
  bool ok = true;
  json doc = {{"schema_version", kSchemaVersion}, {"command", "verify"}, {"seed", options.seed}};
  json results = json::array();
  std::ostringstream csv;
  csv << "suite,property,status,detail\n";
  for (const auto& name : suites) {
    const SuiteReport report = RunSuite(name, options);
    for (const auto& r : report.results) {
      csv << report.suite << ',' << r.name << ',' << (r.passed ? "pass" : "FAIL") << ",\""
          << r.detail << "\"\n";
      results.push_back({{"suite", report.suite},
                         {"property", r.name},
                         {"passed", r.passed},
                         {"detail", r.detail}});
      // Timings vary run to run, so they stay out of the reproducible outputs.
      err << report.suite << '/' << r.name << ": " << (r.passed ? "pass" : "FAIL") << " ("
          << r.seconds << " s)\n";
    }
    ok = ok && report.all_passed();
  }
  doc["results"] = results;
  doc["passed"] = ok;
  if (flags.format == Format::kCsv) {
    Emit(flags, "verify.csv", csv.str(), out);
    EmitFile(flags, "verify.json", doc.dump(2) + "\n");
  } else {
    Emit(flags, "verify.json", doc.dump(2) + "\n", out);
    EmitFile(flags, "verify.csv", csv.str());
  }
  return ok ? kExitOk : kExitPropertyFailure;
}

RunConfig LoadRunConfig(const Flags& flags) {
  if (flags.config_path.empty()) throw InvalidInput("--config PATH is required for '" + flags.command + "'");
  RunConfig rc;
  rc.raw = Config::ReadFile(flags.config_path);
  rc.base_dir = fs::path(flags.config_path).parent_path();
  if (flags.seed) {
    rc.seed = *flags.seed;
    rc.raw.Set("", "seed", std::to_string(*flags.seed));
  } else if (rc.raw.Has("", "seed")) {
    rc.seed = rc.raw.GetUnsigned("", "seed");
  } else {
    throw InvalidInput(flags.config_path + ": a seed is required (set 'seed = N' or pass --seed)");
  }
  return rc;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-task peer prediction with phi-divergence pairing mechanisms", "phimech"};
  app.require_subcommand(1);
  Flags flags;
  std::string format = "csv";
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", flags.config_path, "Run configuration file");
    if (needs_config) opt->required();
    sub->add_option("--seed", flags.seed, "Seed; overrides the config");
    sub->add_option("--out", flags.out_dir, "Directory for output files");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };
  add_common(app.add_subcommand("divergence", "Mutual information of a prior per generator"), true);
  add_common(app.add_subcommand("ideal", "Ideal scoring function of a prior"), true);
  add_common(app.add_subcommand("simulate", "Replicated mechanism payments"), true);
  add_common(app.add_subcommand("learn", "Learn a scoring function from sampled reports"), true);
  auto* verify = app.add_subcommand("verify", "Run a fixed-seed property suite");
  add_common(verify, false);
  verify->add_option("suite", flags.suite, "identities, bounds, learning or all")
      ->check(CLI::IsMember({"identities", "bounds", "learning", "all"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "phimech: " << e.what() << '\n';
    return kExitInputError;
  }
  flags.command = app.get_subcommands().front()->get_name();
  flags.format = format == "json" ? Format::kJson : Format::kCsv;

  try {
    if (flags.command == "verify") return CmdVerify(flags, out, err);
    const RunConfig rc = LoadRunConfig(flags);
    if (flags.command == "divergence") return CmdDivergence(flags, rc, out);
    if (flags.command == "ideal") return CmdIdeal(flags, rc, out);
    if (flags.command == "simulate") return CmdSimulate(flags, rc, out);
    return CmdLearn(flags, rc, out);
  } catch (const Error& e) {
    err << "phimech " << flags.command << ": " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "phimech " << flags.command << ": internal error: " << e.what() << '\n';
    return kExitInternalError;
  }
}

}  // namespace phimech::cli
