// Copyright 2026 The Simplex Population Learning Authors.
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

#ifndef SIMPLEX_PL_META_HPP_
#define SIMPLEX_PL_META_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simplex_pl/best_response.hpp"
#include "simplex_pl/errors.hpp"
#include "simplex_pl/linear_program.hpp"
#include "simplex_pl/parallel.hpp"
#include "simplex_pl/policy.hpp"

namespace simplex_pl {

inline constexpr double kAntisymmetryTolerance = 1e-9;
inline constexpr double kDefaultNashTolerance = 1e-8;
inline constexpr double kRowEqualityTolerance = 1e-9;

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    for (const auto& r : rows) {
      if (r.size() != cols_) throw SchemaError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }
  static Matrix FromRows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw SchemaError("ragged matrix rows");
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * m.cols_);
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::vector<std::vector<double>> ToRows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      out[i].assign(row(i).begin(), row(i).end());
    }
    return out;
  }
  // Leading n x n block.
  Matrix Leading(std::size_t n) const {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = (*this)(i, j);
    }
    return m;
  }
  Matrix Transposed() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    }
    return m;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline void RequireAntisymmetric(const Matrix& u) {
  if (u.rows() != u.cols()) {
    throw SchemaError("payoff matrix must be square");
  }
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (std::size_t j = i; j < u.cols(); ++j) {
      if (std::abs(u(i, j) + u(j, i)) > kAntisymmetryTolerance) {
        throw SchemaError("payoff matrix is not antisymmetric at (" +
                          std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

// U_ij = J(pi_i, pi_j). Only the upper triangle is evaluated; the lower one
// is its reflection, so antisymmetry is exact.
inline Matrix EvalPayoffMatrix(std::span<const TabularPolicy> policies) {
  const std::size_t n = policies.size();
  Matrix u(n, n);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> values(pairs.size());
  ParallelFor(pairs.size(), [&](std::size_t p) {
    values[p] = ExpectedValue(policies[pairs[p].first], policies[pairs[p].second]);
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [i, j] = pairs[p];
    u(i, j) = values[p];
    u(j, i) = -values[p];
  }
  return u;
}

// General two-player zero-sum solution of max_p min_q p'Uq.
struct MatrixGameSolution {
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
  double value = 0.0;  // p'Uq
  // max_i (U q)_i - min_j (p'U)_j, zero at an exact equilibrium.
  double gap = 0.0;
};

inline std::vector<double> MatVec(const Matrix& u, std::span<const double> q) {
  std::vector<double> out(u.rows(), 0.0);
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (std::size_t j = 0; j < u.cols(); ++j) out[i] += u(i, j) * q[j];
  }
  return out;
}

inline std::vector<double> VecMat(std::span<const double> p, const Matrix& u) {
  std::vector<double> out(u.cols(), 0.0);
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (std::size_t j = 0; j < u.cols(); ++j) out[j] += p[i] * u(i, j);
  }
  return out;
}

namespace internal {

// Clips pivoting round-off (negative or ~1e-17 entries) and renormalizes.
inline std::vector<double> Normalized(std::vector<double> v) {
  double total = 0.0;
  for (double x : v) total += std::max(0.0, x);
  for (double& x : v) x = x > 1e-13 * total ? x : 0.0;
  total = 0.0;
  for (double x : v) total += x;
  for (double& x : v) x /= total;
  return v;
}

}  // namespace internal

// Solves the column player's LP  max 1'y  s.t.  (U + s) y <= 1, y >= 0
// with the shift s making every entry >= 1. Normalized y is the column
// strategy; the constraint duals, normalized, are the row strategy.
inline MatrixGameSolution SolveMatrixGame(const Matrix& u) {
  if (u.rows() == 0 || u.cols() == 0) throw SchemaError("empty payoff matrix");
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (double x : u.row(i)) {
      if (!std::isfinite(x)) throw SchemaError("non-finite payoff entry");
      lo = std::min(lo, x);
    }
  }
  const double shift = 1.0 - lo;
  std::vector<std::vector<double>> a(u.rows(), std::vector<double>(u.cols()));
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (std::size_t j = 0; j < u.cols(); ++j) a[i][j] = u(i, j) + shift;
  }
  const auto lp = SolveLinearProgram(a, std::vector<double>(u.rows(), 1.0),
                                     std::vector<double>(u.cols(), 1.0));
  if (!(lp.objective > 0.0)) throw ConvergenceError("degenerate matrix game");
  MatrixGameSolution sol;
  sol.col_strategy = internal::Normalized(lp.primal);
  sol.row_strategy = internal::Normalized(lp.dual);
  const auto uq = MatVec(u, sol.col_strategy);
  const auto pu = VecMat(sol.row_strategy, u);
  sol.gap = *std::max_element(uq.begin(), uq.end()) -
            *std::min_element(pu.begin(), pu.end());
  for (std::size_t i = 0; i < u.rows(); ++i) {
    sol.value += sol.row_strategy[i] * uq[i];
  }
  return sol;
}

struct NashCertificate {
  std::vector<double> strategy;
  // Payoff the strategy guarantees: min_j (s'U)_j.
  double value = 0.0;
  // max_i (U s)_i - value; the strategy is gap-exploitable.
  double gap = 0.0;
};

inline NashCertificate CertifySymmetric(const Matrix& u,
                                        std::vector<double> strategy) {
  const auto su = VecMat(strategy, u);
  const auto us = MatVec(u, strategy);
  NashCertificate cert;
  cert.value = *std::min_element(su.begin(), su.end());
  cert.gap = *std::max_element(us.begin(), us.end()) - cert.value;
  cert.strategy = std::move(strategy);
  return cert;
}

// Maximin strategy of a symmetric zero-sum meta-game.
inline NashCertificate SolveZeroSumNash(const Matrix& u,
                                        double tol = kDefaultNashTolerance) {
  RequireAntisymmetric(u);
  if (u.rows() == 0) throw SchemaError("empty payoff matrix");
  auto cert = CertifySymmetric(u, SolveMatrixGame(u).row_strategy);
  if (cert.gap > tol || std::abs(cert.value) > tol) {
    throw ConvergenceError("Nash certificate gap " + std::to_string(cert.gap) +
                           " exceeds tolerance " + std::to_string(tol));
  }
  return cert;
}

// Row i (i >= 1) is the Nash equilibrium of the leading i x i payoff block,
// zero padded; row 0 is one-hot on the fixed seed policy.
inline Matrix PsroNashMetaGraph(const Matrix& u,
                                double tol = kDefaultNashTolerance) {
  RequireAntisymmetric(u);
  const std::size_t n = u.rows();
  Matrix sigma(n, n);
  if (n == 0) return sigma;
  sigma(0, 0) = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const auto cert = SolveZeroSumNash(u.Leading(i), tol);
    for (std::size_t j = 0; j < i; ++j) sigma(i, j) = cert.strategy[j];
  }
  return sigma;
}

inline void ValidateMetaGraph(const Matrix& sigma) {
  const std::size_t n = sigma.rows();
  if (sigma.cols() != n) throw SchemaError("meta-graph must be square");
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = sigma(i, j);
      if (x < 0.0 || (i > 0 && j >= i && x != 0.0) || (i == 0 && j > 0 && x != 0.0)) {
        throw SchemaError("meta-graph row " + std::to_string(i) +
                          " has invalid support");
      }
      total += x;
    }
    if (std::abs(total - 1.0) > kSimplexTolerance) {
      throw SchemaError("meta-graph row " + std::to_string(i) +
                        " is not a distribution");
    }
  }
}

inline bool RowsEqual(std::span<const double> a, std::span<const double> b) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (std::abs(a[j] - b[j]) > kRowEqualityTolerance) return false;
  }
  return true;
}

// Indices of the first occurrence of each distinct training target. Row 0
// names the fixed seed policy rather than a target, so it is always kept
// and never matched against later rows.
inline std::vector<std::size_t> UniqueRows(const Matrix& sigma) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sigma.rows(); ++i) {
    bool duplicate = false;
    for (std::size_t r : out) {
      if (r != 0 && RowsEqual(sigma.row(i), sigma.row(r))) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) out.push_back(i);
  }
  return out;
}

}  // namespace simplex_pl

#endif  // SIMPLEX_PL_META_HPP_
