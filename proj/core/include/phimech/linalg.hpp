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
#include <initializer_list>
#include <span>
#include <vector>

namespace phimech {

// Probability normalization tolerance.
inline constexpr double kNormalizationTol = 1e-12;
// Tolerance for identities that are exact up to floating-point rounding.
inline constexpr double kEqualityTol = 1e-9;

// Dense row-major matrix of doubles. Small by construction (signal spaces,
// strategies, scoring tables), so no expression templates or views.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  // Row-major flattening.
  std::span<const double> flat() const { return data_; }
  std::span<double> flat() { return data_; }

  std::vector<double> RowSums() const;
  std::vector<double> ColSums() const;
  double Sum() const;
  Matrix Transpose() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

// Largest absolute entrywise difference; dimensions must agree.
double MaxAbsDiff(const Matrix& a, const Matrix& b);

// Determinant via LU with partial pivoting. Square matrices only.
double Determinant(const Matrix& m);

// Outer product u v^T.
Matrix Outer(std::span<const double> u, std::span<const double> v);

// A discrete probability vector. Nonnegative, sums to one within
// kNormalizationTol.
class FiniteDistribution {
 public:
  FiniteDistribution() = default;
  explicit FiniteDistribution(std::vector<double> weights);

  static FiniteDistribution Uniform(std::size_t n);
  // Validates the mass of a flattened matrix without copying rows around.
  static FiniteDistribution FromMatrix(const Matrix& m);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

}  // namespace phimech
