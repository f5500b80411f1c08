#pragma once

#include <vector>

#include "pp/errors.hpp"
#include "pp/grid.hpp"

namespace pp {

// Tridiagonal matrix with n rows: sub (n-1), diag (n), sup (n-1).
class TridiagonalMatrix {
 public:
  explicit TridiagonalMatrix(int n);

  int n() const { return n_; }
  std::vector<double>& sub() { return sub_; }
  std::vector<double>& diag() { return diag_; }
  std::vector<double>& sup() { return sup_; }
  const std::vector<double>& sub() const { return sub_; }
  const std::vector<double>& diag() const { return diag_; }
  const std::vector<double>& sup() const { return sup_; }

  bool is_strictly_diagonally_dominant() const;
  std::vector<double> apply(const std::vector<double>& v) const;
  double inf_norm() const;  // max absolute row sum

 private:
  int n_;
  std::vector<double> sub_, diag_, sup_;
};

// (Nx-1)^2 second-order central-difference Laplacian: diag -2/dx^2,
// off-diagonals 1/dx^2. Requires x_count >= 2.
TridiagonalMatrix assemble_laplacian(const SpaceTimeGrid& grid);

// M = I - eta*L. Strictly diagonally dominant for eta >= 0 (identity at
// eta = 0; the zero value is accepted so eta -> 0 limits are representable).
// eta < 0 violates the coefficient lower-bound assumption.
TridiagonalMatrix assemble_operator_M(const SpaceTimeGrid& grid, double eta_value);

// Flux form for a spatially varying coefficient sampled at cell midpoints
// x_{j+1/2} (length Nx, all samples > 0): row j has sub c_{j-1/2}/dx^2,
// diag -(c_{j-1/2}+c_{j+1/2})/dx^2, sup c_{j+1/2}/dx^2. With constant c this
// reproduces c * assemble_laplacian exactly.
TridiagonalMatrix assemble_variable_flux(const SpaceTimeGrid& grid,
                                         const std::vector<double>& coeff_at_half_nodes);

// Thomas elimination. Requires strict diagonal dominance (checked;
// linalg_error otherwise). The input matrix is not modified.
std::vector<double> thomas_solve(const TridiagonalMatrix& a,
                                 const std::vector<double>& rhs);

// Solves (a + u_col (x) v_row) x = rhs by Sherman-Morrison: two Thomas solves
// plus the rank-one correction. The correction denominator 1 + v_row.(a^-1
// u_col) is guarded at 1e-12 relative magnitude; failure raises
// identifiability_error (discrete analogue of a vanishing weighted average).
std::vector<double> rank_one_solve(const TridiagonalMatrix& a,
                                   const std::vector<double>& u_col,
                                   const std::vector<double>& v_row,
                                   const std::vector<double>& rhs);

}  // namespace pp
