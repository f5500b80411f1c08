#pragma once

#include <vector>

#include "pp/grid.hpp"
#include "pp/tridiag.hpp"

// Assembly pieces shared by the direct and inverse time steppers.
namespace pp::detail {

// Evaluates c(t, .) requiring x-constancy (probed at a few abscissae).
double x_constant_value(const CoefficientField& c, double t, double length,
                        const char* name);

// CN requires the density to be identically one; enforced via declared bounds.
void require_unit_rho(const ProblemSpec& spec);

struct CnOperators {
  TridiagonalMatrix A;  // M - (tau/2) kappa L
  TridiagonalMatrix B;  // M + (tau/2) kappa L
  std::vector<double> ft_mid;  // endpoint-averaged f_tilde at interior nodes
  std::vector<double> p_mid;   // endpoint-averaged p at interior nodes
  double t_mid = 0.0;
};

// Operators and midpoint data for the CN step t_i -> t_{i+1}.
CnOperators cn_operators(const ProblemSpec& spec, const SpaceTimeGrid& grid, int i);

struct RotheSystem {
  TridiagonalMatrix C;            // rho_i/tau - L_eta/tau - L_kappa
  TridiagonalMatrix L_eta;        // zero matrix when eta vanishes identically
  std::vector<double> eta_half;   // samples at x_{k+1/2}, time t_i
  std::vector<double> kappa_half;
  std::vector<double> rho_i;      // interior nodes, time t_i
  std::vector<double> rho_prev;   // interior nodes, time t_{i-1}
  bool eta_is_zero = false;
};

// System for the Rothe step arriving at t_i (i >= 1).
RotheSystem rothe_system(const ProblemSpec& spec, const SpaceTimeGrid& grid, int i);

// Samples c(t, x_{k+1/2}) for k = 0..Nx-1.
std::vector<double> half_node_samples(const CoefficientField& c, double t,
                                      const SpaceTimeGrid& grid);

}  // namespace pp::detail
