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
#include <vector>

#include "phimech/linalg.hpp"

namespace phimech {

// Joint distribution of Alice's and Bob's signals on one task over a finite
// signal space X x Y (rows index x, columns index y).
//
// A regular joint has |X|, |Y| >= 2 and strictly positive marginals. Strategy
// pushforwards can concentrate mass and zero out a marginal; those results are
// constructed through AllowDegenerate() and report full_support() == false.
class FiniteJoint {
 public:
  explicit FiniteJoint(Matrix p);
  static FiniteJoint AllowDegenerate(Matrix p);

  const Matrix& matrix() const { return p_; }
  std::size_t rows() const { return p_.rows(); }
  std::size_t cols() const { return p_.cols(); }
  double operator()(std::size_t x, std::size_t y) const { return p_(x, y); }

  const std::vector<double>& row_marginal() const { return px_; }
  const std::vector<double>& col_marginal() const { return py_; }
  bool full_support() const { return full_support_; }

  // P_X P_Y as a matrix.
  Matrix ProductOfMarginals() const;

 private:
  FiniteJoint(Matrix p, bool require_full_support);

  Matrix p_;
  std::vector<double> px_;
  std::vector<double> py_;
  bool full_support_ = false;
};

// Two conditionally independent noisy readings of a shared Gaussian latent:
// mu ~ N(m0, sigma2), x, y ~ N(mu, tau2) independently given mu.
struct GaussianJoint {
  double m0 = 0.0;
  double sigma2 = 1.0;
  double tau2 = 1.0;

  GaussianJoint() = default;
  GaussianJoint(double m0, double sigma2, double tau2);

  double variance() const { return sigma2 + tau2; }
  double covariance() const { return sigma2; }
  double correlation() const { return sigma2 / (sigma2 + tau2); }
  // Determinant of the joint covariance, 2 sigma2 tau2 + tau2^2.
  double covariance_det() const { return 2.0 * sigma2 * tau2 + tau2 * tau2; }
};

// Latent-class crowdsourcing model: each task has a label z ~ class_prior and
// agent i reports from row z of confusion[i].
struct DawidSkeneModel {
  FiniteDistribution class_prior;
  std::vector<Matrix> confusion;

  DawidSkeneModel() = default;
  DawidSkeneModel(FiniteDistribution class_prior, std::vector<Matrix> confusion);

  std::size_t n_agents() const { return confusion.size(); }
  std::size_t n_labels() const { return class_prior.size(); }
  std::size_t n_reports() const { return confusion.empty() ? 0 : confusion.front().cols(); }

  // Joint of (agent's signal, latent label); rows are signals, columns labels.
  FiniteJoint SignalLabelJoint(std::size_t agent) const;
};

}  // namespace phimech
