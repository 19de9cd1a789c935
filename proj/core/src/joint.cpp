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

#include "phimech/joint.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "phimech/errors.hpp"

namespace phimech {

FiniteJoint::FiniteJoint(Matrix p) : FiniteJoint(std::move(p), true) {}

FiniteJoint FiniteJoint::AllowDegenerate(Matrix p) { return FiniteJoint(std::move(p), false); }

FiniteJoint::FiniteJoint(Matrix p, bool require_full_support) : p_(std::move(p)) {
  if (p_.rows() < 2 || p_.cols() < 2)
    throw InvalidInput("FiniteJoint: signal spaces need at least two elements each");
  double total = 0.0;
  for (double v : p_.flat()) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw InvalidInput("FiniteJoint: negative or non-finite probability");
    total += v;
  }
  if (std::abs(total - 1.0) > kNormalizationTol)
    throw InvalidInput("FiniteJoint: probabilities sum to " + std::to_string(total));
  px_ = p_.RowSums();
  py_ = p_.ColSums();
  full_support_ = true;
  for (double v : px_) full_support_ = full_support_ && v > 0.0;
  for (double v : py_) full_support_ = full_support_ && v > 0.0;
  if (require_full_support && !full_support_)
    throw InvalidInput("FiniteJoint: marginals must have full support");
}

Matrix FiniteJoint::ProductOfMarginals() const { return Outer(px_, py_); }

GaussianJoint::GaussianJoint(double m0_, double sigma2_, double tau2_)
    : m0(m0_), sigma2(sigma2_), tau2(tau2_) {
  if (!std::isfinite(m0)) throw InvalidInput("GaussianJoint: m0 must be finite");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw InvalidInput("GaussianJoint: sigma2 must be positive");
  if (!(tau2 > 0.0) || !std::isfinite(tau2))
    throw InvalidInput("GaussianJoint: tau2 must be positive");
}

DawidSkeneModel::DawidSkeneModel(FiniteDistribution prior, std::vector<Matrix> conf)
    : class_prior(std::move(prior)), confusion(std::move(conf)) {
  if (confusion.empty()) throw InvalidInput("DawidSkeneModel: no agents");
  const std::size_t reports = confusion.front().cols();
  for (const Matrix& c : confusion) {
    if (c.rows() != class_prior.size() || c.cols() != reports)
      throw InvalidInput("DawidSkeneModel: confusion matrix has wrong shape");
    for (std::size_t z = 0; z < c.rows(); ++z) {
      double s = 0.0;
      for (double v : c.row(z)) {
        if (!(v >= 0.0)) throw InvalidInput("DawidSkeneModel: negative confusion entry");
        s += v;
      }
      if (std::abs(s - 1.0) > kNormalizationTol)
        throw InvalidInput("DawidSkeneModel: confusion row does not sum to 1");
    }
  }
}

FiniteJoint DawidSkeneModel::SignalLabelJoint(std::size_t agent) const {
  if (agent >= confusion.size()) throw InvalidInput("DawidSkeneModel: agent out of range");
  const Matrix& c = confusion[agent];
  Matrix j(c.cols(), c.rows());
  for (std::size_t z = 0; z < c.rows(); ++z)
    for (std::size_t x = 0; x < c.cols(); ++x) j(x, z) = class_prior[z] * c(z, x);
  return FiniteJoint::AllowDegenerate(std::move(j));
}

}  // namespace phimech
