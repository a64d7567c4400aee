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

#ifndef SIMPLEX_PL_LINEAR_PROGRAM_HPP_
#define SIMPLEX_PL_LINEAR_PROGRAM_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include "simplex_pl/errors.hpp"

namespace simplex_pl {

struct LinearProgramSolution {
  std::vector<double> primal;  // x
  std::vector<double> dual;    // one multiplier per constraint
  double objective = 0.0;
};

// Dense tableau simplex for
//     maximize c'x  subject to  A x <= b,  x >= 0,
// restricted to b >= 0 so the slack basis is feasible from the start.
// Bland's rule keeps degenerate problems from cycling.
inline LinearProgramSolution SolveLinearProgram(
    const std::vector<std::vector<double>>& a, const std::vector<double>& b,
    const std::vector<double>& c, std::size_t max_pivots = 100000) {
  constexpr double kEps = 1e-12;
  const std::size_t m = b.size();
  const std::size_t n = c.size();
  for (double bi : b) {
    if (bi < 0.0) throw ConvergenceError("linear program needs b >= 0");
  }
  const std::size_t cols = n + m + 1;  // variables, slacks, rhs
  std::vector<double> tab((m + 1) * cols, 0.0);
  auto at = [&](std::size_t r, std::size_t col) -> double& {
    return tab[r * cols + col];
  };
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) at(i, j) = a[i][j];
    at(i, n + i) = 1.0;
    at(i, cols - 1) = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) at(m, j) = -c[j];

  for (std::size_t pivots = 0;; ++pivots) {
    if (pivots == max_pivots) {
      throw ConvergenceError("simplex pivot limit reached");
    }
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (at(m, j) < -kEps) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = m;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double coef = at(i, enter);
      if (coef <= kEps) continue;
      const double ratio = at(i, cols - 1) / coef;
      if (leave == m || ratio < best_ratio - kEps ||
          (std::abs(ratio - best_ratio) <= kEps && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) throw ConvergenceError("linear program is unbounded");
    const double piv = at(leave, enter);
    for (std::size_t j = 0; j < cols; ++j) at(leave, j) /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = at(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) at(i, j) -= f * at(leave, j);
    }
    basis[leave] = enter;
  }

  LinearProgramSolution sol;
  sol.primal.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) sol.primal[basis[i]] = at(i, cols - 1);
  }
  sol.dual.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.dual[i] = std::max(0.0, at(m, n + i));
  sol.objective = at(m, cols - 1);
  return sol;
}

}  // namespace simplex_pl

#endif  // SIMPLEX_PL_LINEAR_PROGRAM_HPP_
