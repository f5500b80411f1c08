#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "pp/grid.hpp"
#include "pp/tridiag.hpp"

namespace pp {

enum class Scheme { CrankNicolson, RotheBackwardEuler };

struct DirectSchemeConfig {
  Scheme scheme = Scheme::CrankNicolson;
  SpaceTimeGrid grid;
  int store_every = 1;  // states kept at i % store_every == 0, plus the final step
};

// One record per time step i = 1..Nt (kept even when states are thinned).
struct StepRecord {
  double t = 0.0;
  double h = std::nan("");                // source factor used or recovered at t
  double denominator = std::nan("");      // inverse runs: measure(u2) or omega_bar_i
  double residual = std::nan("");         // linear-solve residual, inf norm
  double delta_h1_sq_tau = std::nan("");  // ||(u_i-u_{i-1})/tau||_H1^2 * tau
  double grad_sq = std::nan("");          // ||grad u_i||_L2^2 after the step
};

struct Trajectory {
  SpaceTimeGrid grid;
  std::vector<double> times;       // times of stored states
  std::vector<NodalField> states;  // thinned per store_every
  std::optional<std::vector<double>> source_values;  // h_i, i = 1..Nt (inverse runs)
  std::vector<StepRecord> diagnostics;               // one per step
};

// One Crank-Nicolson step t_i -> t_{i+1} of
//   A_{i+1/2} u_{i+1} = B_{i+1/2} u_i + tau (f(u_i) + ft_{i+1/2} + p_{i+1/2} h_{i+1}),
// A = M - (tau/2) kappa L, B = M + (tau/2) kappa L, M = I - eta L.
// Data midpoints are endpoint averages z_{i+1/2} = (z_i + z_{i+1})/2;
// eta and kappa are evaluated analytically at the midpoint time and must be
// x-constant there; rho must be identically 1 (declared bounds (1,1)).
// Exactly one Thomas solve.
NodalField cn_direct_step(const NodalField& state, int i, const ProblemSpec& spec,
                          double h_next, const DirectSchemeConfig& cfg);

// One backward-Euler (Rothe) step to t_i, i >= 1, with variable coefficients
// in flux form:
//   (rho_i/tau) u_i - (1/tau) L_eta u_i - L_kappa u_i
//     = f_total_at_ti + (rho_{i-1}/tau) u_{i-1} - (1/tau) L_eta u_{i-1},
// where f_total_at_ti carries f(u_{i-1}) + F_i (semilinear term lagged).
// eta identically zero is accepted (the eta -> 0 limit); otherwise all
// half-node samples must be positive.
NodalField rothe_direct_step(const NodalField& state, int i, const ProblemSpec& spec,
                             const NodalField& f_total_at_ti,
                             const DirectSchemeConfig& cfg);

// Time loop from u_0 = u0 with the prescribed source factor h.
Trajectory run_direct(const ProblemSpec& spec, const TimeFn& h,
                      const DirectSchemeConfig& cfg);

// Discrete energy  sum_i ||delta u_i||_H1^2 tau + ||u_final||_H1^2
// (the a-priori-estimate quantity; needs the final state, which is always stored).
double discrete_energy(const Trajectory& traj);

}  // namespace pp
