#pragma once

#include <string>
#include <vector>

#include "pp/grid.hpp"

namespace pp {

struct ConditionPasses {
  bool bounds_ok = false;      // sampled coefficients stay inside declared bounds
  bool positivity_ok = false;  // rho, eta lower bounds > 0; kappa lower bound >= 0
  bool u0_compatible = false;  // u0 vanishes at both boundaries
  bool as9 = false;            // omega_bar(t_i) != 0 at every time node
  bool smallness = false;      // zeta_lhs < 1
};

// Advisory diagnostics. Solvers never consult this; violations are recorded,
// not enforced (both built-in cases violate as9 at t = 0 yet solve fine).
struct ConditionReport {
  std::vector<double> omega_bar;  // <p(t_i), omega/rho(t_i)> per time node
  double omega_bar_min = 0.0;     // min_i |omega_bar(t_i)|
  double gradient_sup = 0.0;      // sup_i ||grad(omega/rho(t_i))||_L2, discrete
  double p_norm = 0.0;            // max_i ||p(t_i)||_L2, discrete
  double zeta_lhs = 0.0;          // p_norm^2 M^2 eta1^2 / (4 wm^2 eta0 rho0)
  ConditionPasses passes;
  std::vector<std::string> notes;
};

// Samples every (t_i, x_j); NaN or infinity in any sampled quantity is a
// data_error, but assumption violations only flip the pass flags. When
// omega_bar_min is exactly 0 the zeta denominator uses the floor 1e-14 and a
// note marks the smallness test as not meaningful.
ConditionReport evaluate_conditions(const ProblemSpec& spec,
                                    const SpaceTimeGrid& grid);

// Renders the report: the three readings of the smallness condition (source
// profile size, coefficient ratio, measurement weight quality), the computed
// numbers, the verdict line, and all notes.
std::string check_interpretation_report(const ConditionReport& report);

}  // namespace pp
