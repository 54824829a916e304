#pragma once

#include <cmath>
#include <vector>

namespace nehari {

using Matrix = std::vector<std::vector<double>>;

/// Dense solve A x = b with partial pivoting. The systems here are tiny
/// (m <= 16 group-scaling systems), so robustness beats speed. Returns false
/// when a pivot falls below pivot_tol * max|A|.
inline bool solve_dense(Matrix a, std::vector<double> b, std::vector<double>& x,
                        double pivot_tol = 1e-14) {
  const int m = static_cast<int>(a.size());
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  for (int k = 0; k < m; ++k) {
    int piv = k;
    for (int i = k + 1; i < m; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (std::abs(a[piv][k]) < pivot_tol * scale) return false;
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (int i = k + 1; i < m; ++i) {
      double f = a[i][k] / a[k][k];
      for (int j = k; j < m; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  x.assign(m, 0.0);
  for (int i = m - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < m; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return true;
}

/// True iff the symmetric matrix admits a Cholesky factorization, i.e. is
/// (numerically) positive definite.
inline bool cholesky_succeeds(Matrix a) {
  const int m = static_cast<int>(a.size());
  for (int k = 0; k < m; ++k) {
    double d = a[k][k];
    for (int j = 0; j < k; ++j) d -= a[k][j] * a[k][j];
    if (!(d > 0.0)) return false;
    a[k][k] = std::sqrt(d);
    for (int i = k + 1; i < m; ++i) {
      double s = a[i][k];
      for (int j = 0; j < k; ++j) s -= a[i][j] * a[k][j];
      a[i][k] = s / a[k][k];
    }
  }
  return true;
}

}  // namespace nehari
