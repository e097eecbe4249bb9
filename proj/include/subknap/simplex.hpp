/**
 * @file simplex.hpp
 * @brief Minimal dense simplex for the tiny direction LPs of the continuous
 * solvers: maximize c*x subject to A x <= b, x >= 0 with b >= 0.
 *
 * The all-slack basis is feasible because b >= 0, so no phase one is needed.
 * Bland's rule prevents cycling. Sized for problems with tens of rows.
 */

#pragma once

#include <vector>

#include "subknap/errors.hpp"
#include "subknap/oracle.hpp"

namespace subknap::detail {

inline Vec simplexMax(const std::vector<Vec>& a, const Vec& b, const Vec& c) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());
  const double tol = 1e-11;
  for (double bi : b)
    if (!(bi >= 0.0)) throw InputError("simplex: rhs must be non-negative");

  // rows: m constraint rows, columns: n structural + m slack + rhs
  std::vector<Vec> tab(m, Vec(n + m + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) tab[i][j] = a[i][j];
    tab[i][n + i] = 1.0;
    tab[i][n + m] = b[i];
  }
  Vec reduced(n + m, 0.0);
  for (int j = 0; j < n; ++j) reduced[j] = c[j];
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  for (int iter = 0; iter < 100000; ++iter) {
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (reduced[j] > tol) {
        enter = j;
        break; // Bland: smallest improving index
      }
    }
    if (enter < 0) break;

    int leave = -1;
    double bestRatio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (tab[i][enter] <= tol) continue;
      const double ratio = tab[i][n + m] / tab[i][enter];
      if (leave < 0 || ratio < bestRatio || (ratio == bestRatio && basis[i] < basis[leave])) {
        leave = i;
        bestRatio = ratio;
      }
    }
    if (leave < 0) throw InputError("simplex: unbounded direction LP");

    const double pivot = tab[leave][enter];
    for (double& v : tab[leave]) v /= pivot;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double factor = tab[i][enter];
      if (factor == 0.0) continue;
      for (int j = 0; j <= n + m; ++j) tab[i][j] -= factor * tab[leave][j];
    }
    const double zfactor = reduced[enter];
    for (int j = 0; j < n + m; ++j) reduced[j] -= zfactor * tab[leave][j];
    basis[leave] = enter;
  }

  Vec x(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = tab[i][n + m];
  return x;
}

} // namespace subknap::detail
