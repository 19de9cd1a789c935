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
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "phimech/joint.hpp"
#include "phimech/linalg.hpp"
#include "phimech/mechanism.hpp"
#include "phimech/scoring.hpp"
#include "phimech/strategies.hpp"

namespace phimech {

// Matrix text format: a "rows cols" header line followed by the entries in
// row-major order, whitespace separated.
Matrix ParseMatrix(std::istream& in);
Matrix ReadMatrixFile(const std::string& path);
void WriteMatrix(std::ostream& out, const Matrix& m);

// Key-value record: one "key = value" per line. Blank lines and lines whose
// first non-blank character is '#' are ignored.
using KeyValues = std::map<std::string, std::string, std::less<>>;

// A flat key-value file with "[section]" headers. Keys before the first
// header belong to the unnamed section "".
class Config {
 public:
  static Config Parse(std::istream& in);
  // Throws InvalidInput naming the path when the file cannot be opened.
  static Config ReadFile(const std::string& path);

  bool Has(std::string_view section, std::string_view key) const;
  const KeyValues& Section(std::string_view section) const;
  bool HasSection(std::string_view section) const;

  // Typed getters throw InvalidInput naming "section.key" when the key is
  // missing or malformed; the defaulted forms only throw when malformed.
  std::string GetString(std::string_view section, std::string_view key) const;
  std::string GetString(std::string_view section, std::string_view key,
                        std::string_view fallback) const;
  double GetDouble(std::string_view section, std::string_view key) const;
  double GetDouble(std::string_view section, std::string_view key, double fallback) const;
  std::uint64_t GetUnsigned(std::string_view section, std::string_view key) const;
  std::uint64_t GetUnsigned(std::string_view section, std::string_view key,
                            std::uint64_t fallback) const;

  void Set(std::string_view section, std::string_view key, std::string value);
  const std::map<std::string, KeyValues, std::less<>>& sections() const { return sections_; }

 private:
  std::map<std::string, KeyValues, std::less<>> sections_;
};

KeyValues ParseKeyValues(std::istream& in);
void WriteKeyValues(std::ostream& out, const KeyValues& kv);

// Shortest decimal text that parses back to the same double.
std::string FormatExact(double v);
// Fixed-point with six decimals.
std::string FormatFixed(double v);

double ParseDouble(std::string_view text, std::string_view what);

GaussianJoint GaussianFromKeyValues(const KeyValues& kv);
KeyValues ToKeyValues(const GaussianJoint& g);
KeyValues ToKeyValues(const Quadratic& q);
Quadratic QuadraticFromKeyValues(const KeyValues& kv);
KeyValues ToKeyValues(const EllipseThreshold& e);
EllipseThreshold EllipseFromKeyValues(const KeyValues& kv);
// kind = identity | affine | clamp | constant, with a/b, lo/hi or c.
RealMap RealMapFromKeyValues(const KeyValues& kv);
KeyValues ToKeyValues(const RealMap& m);

// Tabular scores use the matrix format; the parametric forms a key-value
// record with a leading "form" key.
void WriteScoringFunction(std::ostream& out, const ScoringFunction& k);

// CSV with header "task_index,agent_id,report", one row per (task, agent).
void WriteReportsCsv(std::ostream& out, const CrowdReports& crowd);
// The report-space size is not stored in the CSV and must be supplied.
CrowdReports ReadReportsCsv(std::istream& in, std::size_t n_reports);

}  // namespace phimech
