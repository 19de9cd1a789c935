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

#include "phimech/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "phimech/errors.hpp"

namespace phimech {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string Qualified(std::string_view section, std::string_view key) {
  return section.empty() ? std::string(key) : std::string(section) + "." + std::string(key);
}

const std::string& Required(const KeyValues& kv, std::string_view key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw InvalidInput("missing key '" + std::string(key) + "'");
  return it->second;
}

double RequiredDouble(const KeyValues& kv, std::string_view key) {
  return ParseDouble(Required(kv, key), key);
}

double OptionalDouble(const KeyValues& kv, std::string_view key, double fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : ParseDouble(it->second, key);
}

}  // namespace

Matrix ParseMatrix(std::istream& in) {
  long long rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows <= 0 || cols <= 0)
    throw InvalidInput("matrix: expected a positive 'rows cols' header");
  Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  std::string token;
  for (double& v : m.flat()) {
    if (!(in >> token)) throw InvalidInput("matrix: fewer entries than rows * cols");
    v = ParseDouble(token, "matrix entry");
  }
  if (in >> token) throw InvalidInput("matrix: more entries than rows * cols");
  return m;
}

Matrix ReadMatrixFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open matrix file '" + path + "'");
  try {
    return ParseMatrix(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void WriteMatrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? " " : "") << FormatExact(m(r, c));
    out << '\n';
  }
}

Config Config::Parse(std::istream& in) {
  Config cfg;
  std::string section;
  cfg.sections_[section];
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = Trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw InvalidInput("config line " + std::to_string(lineno) + ": malformed section header");
      section = Trim(std::string_view(t).substr(1, t.size() - 2));
      cfg.sections_[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = Trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw InvalidInput("config line " + std::to_string(lineno) + ": empty key");
    auto& kv = cfg.sections_[section];
    if (kv.count(key))
      throw InvalidInput("config line " + std::to_string(lineno) + ": duplicate key '" +
                         Qualified(section, key) + "'");
    kv[key] = Trim(std::string_view(t).substr(eq + 1));
  }
  return cfg;
}

Config Config::ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  try {
    return Parse(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

bool Config::HasSection(std::string_view section) const {
  return sections_.find(section) != sections_.end();
}

const KeyValues& Config::Section(std::string_view section) const {
  const auto it = sections_.find(section);
  if (it == sections_.end())
    throw InvalidInput("config has no [" + std::string(section) + "] section");
  return it->second;
}

bool Config::Has(std::string_view section, std::string_view key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::string Config::GetString(std::string_view section, std::string_view key) const {
  if (!Has(section, key)) throw InvalidInput("config is missing '" + Qualified(section, key) + "'");
  return sections_.find(section)->second.find(key)->second;
}

std::string Config::GetString(std::string_view section, std::string_view key,
                              std::string_view fallback) const {
  return Has(section, key) ? GetString(section, key) : std::string(fallback);
}

double Config::GetDouble(std::string_view section, std::string_view key) const {
  return ParseDouble(GetString(section, key), Qualified(section, key));
}

double Config::GetDouble(std::string_view section, std::string_view key, double fallback) const {
  return Has(section, key) ? GetDouble(section, key) : fallback;
}

std::uint64_t Config::GetUnsigned(std::string_view section, std::string_view key) const {
  const std::string text = GetString(section, key);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InvalidInput("'" + Qualified(section, key) + "' is not a nonnegative integer: " + text);
  return v;
}

std::uint64_t Config::GetUnsigned(std::string_view section, std::string_view key,
                                  std::uint64_t fallback) const {
  return Has(section, key) ? GetUnsigned(section, key) : fallback;
}

void Config::Set(std::string_view section, std::string_view key, std::string value) {
  sections_[std::string(section)][std::string(key)] = std::move(value);
}

KeyValues ParseKeyValues(std::istream& in) {
  const Config cfg = Config::Parse(in);
  if (cfg.sections().size() > 1) throw InvalidInput("key-value record: unexpected section header");
  return cfg.Section("");
}

void WriteKeyValues(std::ostream& out, const KeyValues& kv) {
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

std::string FormatExact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string FormatFixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  // Tiny negatives would otherwise print as a signed zero.
  if (s == "-0.000000") s = "0.000000";
  return s;
}

double ParseDouble(std::string_view text, std::string_view what) {
  const std::string t = Trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw InvalidInput("'" + std::string(what) + "' is not a finite number: " + t);
  return v;
}

GaussianJoint GaussianFromKeyValues(const KeyValues& kv) {
  return GaussianJoint(OptionalDouble(kv, "m0", 0.0), RequiredDouble(kv, "sigma2"),
                       RequiredDouble(kv, "tau2"));
}

KeyValues ToKeyValues(const GaussianJoint& g) {
  return {{"m0", FormatExact(g.m0)}, {"sigma2", FormatExact(g.sigma2)},
          {"tau2", FormatExact(g.tau2)}};
}

KeyValues ToKeyValues(const Quadratic& q) {
  return {{"form", "quadratic"},     {"cxx", FormatExact(q.cxx)}, {"cyy", FormatExact(q.cyy)},
          {"cxy", FormatExact(q.cxy)}, {"cx", FormatExact(q.cx)},   {"cy", FormatExact(q.cy)},
          {"c0", FormatExact(q.c0)}};
}

Quadratic QuadraticFromKeyValues(const KeyValues& kv) {
  Quadratic q;
  q.cxx = OptionalDouble(kv, "cxx", 0.0);
  q.cyy = OptionalDouble(kv, "cyy", 0.0);
  q.cxy = OptionalDouble(kv, "cxy", 0.0);
  q.cx = OptionalDouble(kv, "cx", 0.0);
  q.cy = OptionalDouble(kv, "cy", 0.0);
  q.c0 = OptionalDouble(kv, "c0", 0.0);
  return q;
}

KeyValues ToKeyValues(const EllipseThreshold& e) {
  return {{"form", "ellipse_threshold"},
          {"g11", FormatExact(e.form(0, 0))},
          {"g12", FormatExact(e.form(0, 1))},
          {"g21", FormatExact(e.form(1, 0))},
          {"g22", FormatExact(e.form(1, 1))},
          {"center_x", FormatExact(e.center_x)},
          {"center_y", FormatExact(e.center_y)},
          {"threshold", FormatExact(e.threshold)},
          {"hi", FormatExact(e.hi)},
          {"lo", FormatExact(e.lo)}};
}

EllipseThreshold EllipseFromKeyValues(const KeyValues& kv) {
  EllipseThreshold e;
  e.form = Matrix{{RequiredDouble(kv, "g11"), RequiredDouble(kv, "g12")},
                  {RequiredDouble(kv, "g21"), RequiredDouble(kv, "g22")}};
  e.center_x = OptionalDouble(kv, "center_x", 0.0);
  e.center_y = OptionalDouble(kv, "center_y", 0.0);
  e.threshold = RequiredDouble(kv, "threshold");
  e.hi = OptionalDouble(kv, "hi", 0.5);
  e.lo = OptionalDouble(kv, "lo", -0.5);
  return e;
}

RealMap RealMapFromKeyValues(const KeyValues& kv) {
  const auto it = kv.find("kind");
  const std::string kind = it == kv.end() ? "identity" : it->second;
  if (kind == "identity") return RealMap::Identity();
  if (kind == "affine") return RealMap::Affine(RequiredDouble(kv, "a"), RequiredDouble(kv, "b"));
  if (kind == "clamp") return RealMap::Clamp(RequiredDouble(kv, "lo"), RequiredDouble(kv, "hi"));
  if (kind == "constant") return RealMap::Constant(RequiredDouble(kv, "c"));
  throw InvalidInput("unknown real strategy kind '" + kind + "'");
}

KeyValues ToKeyValues(const RealMap& m) {
  switch (m.kind) {
    case RealMap::Kind::kIdentity: return {{"kind", "identity"}};
    case RealMap::Kind::kAffine:
      return {{"kind", "affine"}, {"a", FormatExact(m.first)}, {"b", FormatExact(m.second)}};
    case RealMap::Kind::kClamp:
      return {{"kind", "clamp"}, {"lo", FormatExact(m.first)}, {"hi", FormatExact(m.second)}};
    case RealMap::Kind::kConstant: return {{"kind", "constant"}, {"c", FormatExact(m.first)}};
  }
  return {};
}

void WriteScoringFunction(std::ostream& out, const ScoringFunction& k) {
  if (const auto* t = std::get_if<Tabular>(&k)) {
    WriteMatrix(out, t->k);
  } else if (const auto* q = std::get_if<Quadratic>(&k)) {
    WriteKeyValues(out, ToKeyValues(*q));
  } else {
    WriteKeyValues(out, ToKeyValues(std::get<EllipseThreshold>(k)));
  }
}

void WriteReportsCsv(std::ostream& out, const CrowdReports& crowd) {
  crowd.Validate();
  out << "task_index,agent_id,report\n";
  for (std::size_t s = 0; s < crowd.n_tasks(); ++s)
    for (std::size_t i = 0; i < crowd.n_agents(); ++i)
      out << s << ',' << i << ',' << crowd.reports[i][s] << '\n';
}

CrowdReports ReadReportsCsv(std::istream& in, std::size_t n_reports) {
  std::string line;
  if (!std::getline(in, line) || Trim(line) != "task_index,agent_id,report")
    throw InvalidInput("reports CSV: expected header 'task_index,agent_id,report'");
  struct Row {
    std::size_t task, agent;
    int report;
  };
  std::vector<Row> rows;
  std::size_t n_tasks = 0, n_agents = 0, lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    std::istringstream ls(line);
    Row r{};
    char c1 = 0, c2 = 0;
    if (!(ls >> r.task >> c1 >> r.agent >> c2 >> r.report) || c1 != ',' || c2 != ',')
      throw InvalidInput("reports CSV line " + std::to_string(lineno) + ": malformed row");
    rows.push_back(r);
    n_tasks = std::max(n_tasks, r.task + 1);
    n_agents = std::max(n_agents, r.agent + 1);
  }
  CrowdReports crowd{n_reports, std::vector<std::vector<int>>(n_agents, std::vector<int>(n_tasks, -1))};
  for (const Row& r : rows) {
    if (crowd.reports[r.agent][r.task] != -1)
      throw InvalidInput("reports CSV: duplicate (task, agent) row");
    crowd.reports[r.agent][r.task] = r.report;
  }
  crowd.Validate();  // also catches missing rows, which are still -1
  return crowd;
}

}  // namespace phimech
