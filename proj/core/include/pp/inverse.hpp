#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pp/direct.hpp"
#include "pp/grid.hpp"

namespace pp {

enum class InverseScheme { CnSplitting, RotheCoupled };

struct InverseSchemeConfig {
  InverseScheme scheme = InverseScheme::CnSplitting;
  SpaceTimeGrid grid;
  int store_every = 1;
  // Relative floor for the recovery denominator (measure of the unit-source
  // response for CN, the weighted source average for Rothe).
  double denominator_floor = 1e-12;
  // Rothe only: ramp width of the C1 window substituted for an indicator
  // omega when spec.omega_window is set. Default 4*dx; 0 disables.
  std::optional<double> omega_mollify_width;
};

// Omega samples at all nodes as the scheme actually uses them (mollified for
// the Rothe scheme when spec.omega_window is set, raw otherwise).
std::vector<double> effective_omega(const ProblemSpec& spec,
                                    const InverseSchemeConfig& cfg);

// One CN splitting step t_i -> t_{i+1} (i >= 0): with A, B, data midpoints as
// in cn_direct_step, solve
//   A u1 = B u_i + tau (f(u_i) + ft_mid),   A u2 = tau p_mid,
//   h_{i+1} = (m(t_{i+1}) - <u1, omega>) / <u2, omega>,
//   u_{i+1} = u1 + h_{i+1} u2.
// Returns (u_{i+1}, h_{i+1}); throws identifiability_error when the
// denominator falls under denominator_floor (relative to tau * <|p_mid|, |omega|>).
std::pair<NodalField, double> cn_inverse_step(const NodalField& state, int i,
                                              const ProblemSpec& spec,
                                              const InverseSchemeConfig& cfg);

// One coupled Rothe step arriving at t_i (i >= 1). Eliminating h_i from the
// backward-Euler update via the differentiated measurement identity gives a
// rank-one modification of the direct-step matrix:
//   (C - p_i s^T / (tau omega_bar_i)) u_i = g_i,
// where s is the discrete gradient form of omega/rho against eta, and h_i is
// evaluated from the identity afterwards. Requires spec.measurement_derivative.
std::pair<NodalField, double> rothe_inverse_step(const NodalField& state, int i,
                                                 const ProblemSpec& spec,
                                                 const InverseSchemeConfig& cfg);

// Time loop recovering (u, h) from the measurement data in spec.
// Trajectory.source_values holds h_i for i = 1..Nt.
Trajectory run_inverse(const ProblemSpec& spec, const InverseSchemeConfig& cfg);

// Measurement tabulated at the grid's time nodes (index 0..Nt).
// m_prime[0] is 0 (never used by the schemes).
struct MeasurementTable {
  std::vector<double> m;
  std::vector<double> m_prime;
};

// Builds the measurement a stored direct trajectory induces, using the same
// omega samples the inverse scheme in cfg would use. m_prime is the scheme-
// consistent derivative: the backward difference of m plus the tau-weighted
// kappa gradient form of the state increment (the exact identity the Rothe
// step inverts, so a roundtrip reproduces h to roundoff). Requires the
// trajectory to hold every state (store_every == 1).
MeasurementTable measurement_from_trajectory(const Trajectory& traj,
                                             const ProblemSpec& spec,
                                             const InverseSchemeConfig& cfg);

// Wraps node values as a function of t; t must coincide with a time node of
// the grid to within 1e-6 * tau.
TimeFn tabulated_time_function(std::vector<double> values,
                               const SpaceTimeGrid& grid);

}  // namespace pp
