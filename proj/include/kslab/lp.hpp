#pragma once

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "kslab/rational.hpp"

namespace kslab {

// Equality-form feasibility problem: A x = b, x >= 0, rational entries.
struct LinearProblem {
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
};

struct LpResult {
  bool feasible = false;
  std::vector<Rational> witness;      // feasible: basic solution, A x = b, x >= 0
  std::vector<Rational> certificate;  // infeasible: y with y^T A >= 0, y^T b < 0
};

namespace detail {

inline Rational dot(const std::vector<Rational>& u, const std::vector<Rational>& v) {
  Rational s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

}  // namespace detail

// Exact phase-one simplex with Bland's anti-cycling rule. Both outcomes
// are re-verified by substitution before returning.
inline LpResult lp_feasible(const LinearProblem& problem) {
  const std::size_t m = problem.b.size();
  const std::size_t n = m ? problem.a.front().size() : 0;
  if (problem.a.size() != m)
    throw std::invalid_argument("lp_feasible: row count mismatch");

  // Tableau rows: [x columns | artificial columns | rhs], rhs >= 0.
  std::vector<int> row_sign(m, 1);
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(n + m + 1, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = problem.b[i] < 0;
    row_sign[i] = flip ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j)
      t[i][j] = flip ? -problem.a[i][j] : problem.a[i][j];
    t[i][n + i] = 1;
    t[i][n + m] = flip ? -problem.b[i] : problem.b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  auto cost = [&](std::size_t j) { return j >= n ? Rational(1) : Rational(0); };

  auto pivot = [&](std::size_t row, std::size_t col) {
    const Rational p = t[row][col];
    for (auto& v : t[row]) v /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || t[i][col] == 0) continue;
      const Rational f = t[i][col];
      for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[row][j];
    }
    basis[row] = col;
  };

  // Minimize the sum of artificials.
  for (;;) {
    // Reduced cost c_j - y^T A_j, entering = lowest index negative (Bland).
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < n + m; ++j) {
      Rational rc = cost(j);
      for (std::size_t i = 0; i < m; ++i)
        if (cost(basis[i]) != 0) rc -= cost(basis[i]) * t[i][j];
      if (rc < 0) {
        enter = j;
        break;
      }
    }
    if (enter == n + m) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      const Rational ratio = t[i][n + m] / t[i][enter];
      if (leave == m || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded cannot happen in phase one
    pivot(leave, enter);
  }

  Rational objective = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] >= n) objective += t[i][n + m];

  LpResult result;
  if (objective == 0) {
    // Drive any zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (t[i][j] != 0) {
          pivot(i, j);
          break;
        }
    }
    result.feasible = true;
    result.witness.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) result.witness[basis[i]] = t[i][n + m];
    for (std::size_t i = 0; i < m; ++i) {
      Rational lhs = 0;
      for (std::size_t j = 0; j < n; ++j) lhs += problem.a[i][j] * result.witness[j];
      if (lhs != problem.b[i])
        throw std::logic_error("lp_feasible: witness failed re-substitution");
    }
    for (const Rational& x : result.witness)
      if (x < 0) throw std::logic_error("lp_feasible: negative witness entry");
  } else {
    // Simplex multipliers y_i = (c_B B^{-1})_i live in the artificial
    // columns. On the sign-adjusted system y^T A <= 0, y^T b > 0; undo
    // row flips and negate to meet the stated certificate convention.
    result.feasible = false;
    result.certificate.assign(m, Rational(0));
    for (std::size_t k = 0; k < m; ++k) {
      Rational y = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (cost(basis[i]) != 0) y += t[i][n + k];
      result.certificate[k] = -Rational(row_sign[k]) * y;
    }
    for (std::size_t j = 0; j < n; ++j) {
      Rational col = 0;
      for (std::size_t i = 0; i < m; ++i)
        col += result.certificate[i] * problem.a[i][j];
      if (col < 0) throw std::logic_error("lp_feasible: certificate failed y^T A >= 0");
    }
    if (detail::dot(result.certificate, problem.b) >= 0)
      throw std::logic_error("lp_feasible: certificate failed y^T b < 0");
  }
  return result;
}

}  // namespace kslab
