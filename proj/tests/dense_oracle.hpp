#pragma once

// Dense LU with partial pivoting, used as an independent oracle against the
// tridiagonal solvers. Deliberately written in the most literal textbook form.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

// Row-major n x n solve of A x = b. Throws on a (numerically) singular pivot.
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
  const size_t n = b.size();
  if (a.size() != n * n) throw std::invalid_argument("dense_solve: shape mismatch");
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;

  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    double best = std::abs(a[perm[col] * n + col]);
    for (size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a[perm[r] * n + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) throw std::runtime_error("dense_solve: singular matrix");
    std::swap(perm[col], perm[piv]);
    const size_t prow = perm[col];
    for (size_t r = col + 1; r < n; ++r) {
      const size_t row = perm[r];
      const double factor = a[row * n + col] / a[prow * n + col];
      a[row * n + col] = 0.0;
      for (size_t c = col + 1; c < n; ++c) a[row * n + c] -= factor * a[prow * n + c];
      b[row] -= factor * b[prow];
    }
  }

  std::vector<double> x(n);
  for (size_t i = n; i-- > 0;) {
    double s = b[perm[i]];
    for (size_t c = i + 1; c < n; ++c) s -= a[perm[i] * n + c] * x[c];
    x[i] = s / a[perm[i] * n + i];
  }
  return x;
}

}  // namespace oracle
