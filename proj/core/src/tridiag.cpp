#include "pp/tridiag.hpp"

#include <cmath>

namespace pp {

TridiagonalMatrix::TridiagonalMatrix(int n) : n_(n) {
  if (n < 1) throw data_error("TridiagonalMatrix: n must be positive");
  sub_.assign(static_cast<size_t>(n - 1), 0.0);
  diag_.assign(static_cast<size_t>(n), 0.0);
  sup_.assign(static_cast<size_t>(n - 1), 0.0);
}

bool TridiagonalMatrix::is_strictly_diagonally_dominant() const {
  for (int k = 0; k < n_; ++k) {
    double off = 0.0;
    if (k > 0) off += std::abs(sub_[k - 1]);
    if (k < n_ - 1) off += std::abs(sup_[k]);
    if (!(std::abs(diag_[k]) > off)) return false;
  }
  return true;
}

std::vector<double> TridiagonalMatrix::apply(const std::vector<double>& v) const {
  if (static_cast<int>(v.size()) != n_)
    throw data_error("TridiagonalMatrix::apply: size mismatch");
  std::vector<double> out(static_cast<size_t>(n_));
  for (int k = 0; k < n_; ++k) {
    double acc = diag_[k] * v[k];
    if (k > 0) acc += sub_[k - 1] * v[k - 1];
    if (k < n_ - 1) acc += sup_[k] * v[k + 1];
    out[k] = acc;
  }
  return out;
}

double TridiagonalMatrix::inf_norm() const {
  double best = 0.0;
  for (int k = 0; k < n_; ++k) {
    double row = std::abs(diag_[k]);
    if (k > 0) row += std::abs(sub_[k - 1]);
    if (k < n_ - 1) row += std::abs(sup_[k]);
    best = std::max(best, row);
  }
  return best;
}

TridiagonalMatrix assemble_laplacian(const SpaceTimeGrid& grid) {
  if (grid.x_count() < 2)
    throw data_error("assemble_laplacian: degenerate grid (x_count < 2)");
  const int n = grid.interior_count();
  const double inv2 = 1.0 / (grid.dx() * grid.dx());
  TridiagonalMatrix L(n);
  for (int k = 0; k < n; ++k) L.diag()[k] = -2.0 * inv2;
  for (int k = 0; k < n - 1; ++k) {
    L.sub()[k] = inv2;
    L.sup()[k] = inv2;
  }
  return L;
}

TridiagonalMatrix assemble_operator_M(const SpaceTimeGrid& grid, double eta_value) {
  if (eta_value < 0.0)
    throw assumption_error("assemble_operator_M: eta must be non-negative");
  if (grid.x_count() < 2)
    throw data_error("assemble_operator_M: degenerate grid (x_count < 2)");
  const int n = grid.interior_count();
  const double inv2 = 1.0 / (grid.dx() * grid.dx());
  TridiagonalMatrix M(n);
  for (int k = 0; k < n; ++k) M.diag()[k] = 1.0 + 2.0 * eta_value * inv2;
  for (int k = 0; k < n - 1; ++k) {
    M.sub()[k] = -eta_value * inv2;
    M.sup()[k] = -eta_value * inv2;
  }
  return M;
}

TridiagonalMatrix assemble_variable_flux(const SpaceTimeGrid& grid,
                                         const std::vector<double>& coeff_at_half_nodes) {
  if (grid.x_count() < 2)
    throw data_error("assemble_variable_flux: degenerate grid (x_count < 2)");
  if (static_cast<int>(coeff_at_half_nodes.size()) != grid.x_count())
    throw data_error("assemble_variable_flux: need one sample per cell midpoint");
  for (double c : coeff_at_half_nodes) {
    if (std::isnan(c)) throw data_error("assemble_variable_flux: NaN coefficient");
    if (!(c > 0.0))
      throw assumption_error("assemble_variable_flux: nonpositive coefficient sample");
  }
  const int n = grid.interior_count();
  const double inv2 = 1.0 / (grid.dx() * grid.dx());
  TridiagonalMatrix A(n);
  for (int k = 0; k < n; ++k)
    A.diag()[k] = -(coeff_at_half_nodes[k] + coeff_at_half_nodes[k + 1]) * inv2;
  for (int k = 0; k < n - 1; ++k) {
    A.sub()[k] = coeff_at_half_nodes[k + 1] * inv2;
    A.sup()[k] = coeff_at_half_nodes[k + 1] * inv2;
  }
  return A;
}

std::vector<double> thomas_solve(const TridiagonalMatrix& a,
                                 const std::vector<double>& rhs) {
  const int n = a.n();
  if (static_cast<int>(rhs.size()) != n)
    throw data_error("thomas_solve: rhs size mismatch");
  if (!a.is_strictly_diagonally_dominant())
    throw linalg_error("thomas_solve: matrix is not strictly diagonally dominant");
  // Work on copies; the caller's matrix stays untouched.
  std::vector<double> b(a.diag()), c(a.sup()), d(rhs);
  for (int k = 1; k < n; ++k) {
    const double m = a.sub()[k - 1] / b[k - 1];
    b[k] -= m * c[k - 1];
    d[k] -= m * d[k - 1];
  }
  std::vector<double> x(static_cast<size_t>(n));
  x[n - 1] = d[n - 1] / b[n - 1];
  for (int k = n - 2; k >= 0; --k) x[k] = (d[k] - c[k] * x[k + 1]) / b[k];
  return x;
}

static double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

std::vector<double> rank_one_solve(const TridiagonalMatrix& a,
                                   const std::vector<double>& u_col,
                                   const std::vector<double>& v_row,
                                   const std::vector<double>& rhs) {
  const int n = a.n();
  if (static_cast<int>(u_col.size()) != n || static_cast<int>(v_row.size()) != n)
    throw data_error("rank_one_solve: vector size mismatch");
  std::vector<double> y = thomas_solve(a, rhs);
  std::vector<double> z = thomas_solve(a, u_col);
  const double vz = dot(v_row, z);
  const double denom = 1.0 + vz;
  if (std::abs(denom) < 1e-12 * (1.0 + std::abs(vz)))
    throw identifiability_error(
        "rank_one_solve: Sherman-Morrison denominator below floor");
  const double scale = dot(v_row, y) / denom;
  for (int k = 0; k < n; ++k) y[k] -= z[k] * scale;
  return y;
}

}  // namespace pp
