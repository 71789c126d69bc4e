#pragma once

// Dense exact linear algebra over Rational: linear solves, a tableau simplex
// for small LPs, and a positive-semidefiniteness test.

#include <optional>
#include <stdexcept>
#include <vector>

#include "napt/rational.hpp"

namespace napt::linalg {

using Matrix = std::vector<std::vector<Rational>>;
using Vector = std::vector<Rational>;

/// Solves A x = b for square nonsingular A. Throws std::domain_error if singular.
inline Vector solve(Matrix a, Vector b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero()) ++pivot;
    if (pivot == n) throw std::domain_error("singular linear system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t row = col + 1; row < n; ++row) {
      if (a[row][col].is_zero()) continue;
      Rational f = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
      b[row] -= f * b[col];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

struct LpResult {
  bool bounded = true;
  Rational objective;
  Vector x;
};

/// Maximizes c.x subject to A x <= b, x >= 0, where b >= 0 so that the origin
/// is feasible. Tableau simplex with Bland's rule; exact, always terminates.
inline LpResult maximize(const Matrix& a, const Vector& b, const Vector& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  for (const auto& bi : b)
    if (bi.sign() < 0) throw std::domain_error("simplex needs a feasible origin");
  // Columns: n structural, m slack, then rhs.
  Matrix t(m, Vector(n + m + 1));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = Rational(1);
    t[i][n + m] = b[i];
    basis[i] = n + i;
  }
  // Reduced costs for maximization: positive entry -> improving column.
  Vector cost(n + m + 1);
  for (std::size_t j = 0; j < n; ++j) cost[j] = c[j];

  for (;;) {
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < n + m; ++j)
      if (cost[j].sign() > 0) {
        enter = j;
        break;
      }
    if (enter == n + m) break;
    std::optional<std::size_t> leave;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter].sign() <= 0) continue;
      Rational ratio = t[i][n + m] / t[i][enter];
      if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (!leave) return {false, Rational(0), {}};
    const std::size_t r = *leave;
    Rational pivot = t[r][enter];
    for (auto& v : t[r]) v /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || t[i][enter].is_zero()) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j <= n + m; ++j)
        if (!t[r][j].is_zero()) t[i][j] -= f * t[r][j];
    }
    if (!cost[enter].is_zero()) {
      Rational f = cost[enter];
      for (std::size_t j = 0; j <= n + m; ++j)
        if (!t[r][j].is_zero()) cost[j] -= f * t[r][j];
    }
    basis[r] = enter;
  }
  LpResult res;
  res.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = t[i][n + m];
  for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  return res;
}

/// Exact test of positive semidefiniteness for a symmetric matrix.
inline bool is_positive_semidefinite(Matrix a) {
  for (;;) {
    const std::size_t n = a.size();
    if (n == 0) return true;
    std::optional<std::size_t> pivot;
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i][i].sign() < 0) return false;
      if (!pivot && a[i][i].sign() > 0) pivot = i;
    }
    if (!pivot) {
      for (const auto& row : a)
        for (const auto& v : row)
          if (!v.is_zero()) return false;
      return true;
    }
    const std::size_t p = *pivot;
    Matrix next;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == p) continue;
      std::vector<Rational> row;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == p) continue;
        row.push_back(a[i][j] - a[i][p] * a[p][j] / a[p][p]);
      }
      next.push_back(std::move(row));
    }
    a = std::move(next);
  }
}

}  // namespace napt::linalg
