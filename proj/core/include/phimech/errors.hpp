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

#include <stdexcept>
#include <string>

namespace phimech {

// Base of every error raised by the library. Callers that only need to
// distinguish "bad input" from "bug" can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: unknown names, dimension mismatches, bad indices.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A value lies outside the domain of a function (e.g. Phi* evaluated outside
// its conjugate domain, a ratio with a zero product marginal).
class DomainError : public Error {
 public:
  using Error::Error;
};

// p(w) > 0 where q(w) == 0.
class AbsoluteContinuityError : public Error {
 public:
  using Error::Error;
};

// A combination the library deliberately does not handle.
class Unsupported : public Error {
 public:
  using Error::Error;
};

// The empirical risk solver produced a non-finite objective.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace phimech
