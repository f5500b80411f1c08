#include "pp/direct.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "pp/errors.hpp"
#include "scheme_detail.hpp"

namespace pp {
namespace detail {

double x_constant_value(const CoefficientField& c, double t, double length,
                        const char* name) {
  const double ref = c(t, 0.0);
  if (std::isnan(ref)) {
    throw data_error(std::string(name) + " evaluates to NaN at t = " + std::to_string(t));
  }
  const double probes[] = {0.37 * length, 0.73 * length, length};
  for (double x : probes) {
    const double v = c(t, x);
    if (std::isnan(v)) {
      throw data_error(std::string(name) + " evaluates to NaN at t = " + std::to_string(t));
    }
    if (std::abs(v - ref) > 1e-13 * std::max(1.0, std::abs(ref))) {
      throw assumption_error(std::string(name) +
                             " must be x-constant for the Crank-Nicolson scheme");
    }
  }
  return ref;
}

void require_unit_rho(const ProblemSpec& spec) {
  if (spec.rho.lower_bound() != 1.0 || spec.rho.upper_bound() != 1.0) {
    throw assumption_error(
        "Crank-Nicolson scheme requires rho identically 1 (declared bounds (1,1))");
  }
}

CnOperators cn_operators(const ProblemSpec& spec, const SpaceTimeGrid& grid, int i) {
  const int m = grid.interior_count();
  const double tau = grid.tau();
  const double dx2 = grid.dx() * grid.dx();
  const double t0 = grid.t(i);
  const double t1 = grid.t(i + 1);
  const double t_mid = t0 + 0.5 * tau;

  const double eta_mid = x_constant_value(spec.eta, t_mid, grid.length(), "eta");
  const double kappa_mid = x_constant_value(spec.kappa, t_mid, grid.length(), "kappa");

  const double ca = eta_mid + 0.5 * tau * kappa_mid;
  const double cb = eta_mid - 0.5 * tau * kappa_mid;

  CnOperators ops{TridiagonalMatrix(m), TridiagonalMatrix(m),
                  std::vector<double>(static_cast<size_t>(m)),
                  std::vector<double>(static_cast<size_t>(m)), t_mid};
  for (int k = 0; k < m; ++k) {
    ops.A.diag()[static_cast<size_t>(k)] = 1.0 + 2.0 * ca / dx2;
    ops.B.diag()[static_cast<size_t>(k)] = 1.0 + 2.0 * cb / dx2;
  }
  for (int k = 0; k + 1 < m; ++k) {
    ops.A.sub()[static_cast<size_t>(k)] = -ca / dx2;
    ops.A.sup()[static_cast<size_t>(k)] = -ca / dx2;
    ops.B.sub()[static_cast<size_t>(k)] = -cb / dx2;
    ops.B.sup()[static_cast<size_t>(k)] = -cb / dx2;
  }
  for (int k = 0; k < m; ++k) {
    const double x = grid.x(k + 1);
    ops.ft_mid[static_cast<size_t>(k)] =
        0.5 * (spec.f_tilde(t0, x) + spec.f_tilde(t1, x));
    ops.p_mid[static_cast<size_t>(k)] = 0.5 * (spec.p(t0, x) + spec.p(t1, x));
  }
  return ops;
}

std::vector<double> half_node_samples(const CoefficientField& c, double t,
                                      const SpaceTimeGrid& grid) {
  std::vector<double> out(static_cast<size_t>(grid.x_count()));
  for (int k = 0; k < grid.x_count(); ++k) {
    out[static_cast<size_t>(k)] = c(t, (k + 0.5) * grid.dx());
  }
  return out;
}

RotheSystem rothe_system(const ProblemSpec& spec, const SpaceTimeGrid& grid, int i) {
  const int m = grid.interior_count();
  const double tau = grid.tau();
  const double ti = grid.t(i);

  RotheSystem sys{TridiagonalMatrix(m), TridiagonalMatrix(m),
                  half_node_samples(spec.eta, ti, grid),
                  half_node_samples(spec.kappa, ti, grid),
                  std::vector<double>(static_cast<size_t>(m)),
                  std::vector<double>(static_cast<size_t>(m)), false};

  bool all_zero = true;
  bool any_zero = false;
  for (double v : sys.eta_half) {
    if (std::isnan(v)) throw data_error("eta evaluates to NaN at a half node");
    if (v < 0.0) throw assumption_error("eta must be nonnegative");
    if (v == 0.0) any_zero = true; else all_zero = false;
  }
  sys.eta_is_zero = all_zero;
  if (any_zero && !all_zero) {
    throw assumption_error("eta vanishes at some half nodes but not others");
  }
  if (!sys.eta_is_zero) {
    sys.L_eta = assemble_variable_flux(grid, sys.eta_half);
  }
  const TridiagonalMatrix L_kappa = assemble_variable_flux(grid, sys.kappa_half);

  for (int k = 0; k < m; ++k) {
    const double x = grid.x(k + 1);
    sys.rho_i[static_cast<size_t>(k)] = spec.rho(ti, x);
    sys.rho_prev[static_cast<size_t>(k)] = spec.rho(ti - tau, x);
  }

  for (int k = 0; k < m; ++k) {
    const size_t sk = static_cast<size_t>(k);
    sys.C.diag()[sk] = sys.rho_i[sk] / tau - sys.L_eta.diag()[sk] / tau - L_kappa.diag()[sk];
  }
  for (int k = 0; k + 1 < m; ++k) {
    const size_t sk = static_cast<size_t>(k);
    sys.C.sub()[sk] = -sys.L_eta.sub()[sk] / tau - L_kappa.sub()[sk];
    sys.C.sup()[sk] = -sys.L_eta.sup()[sk] / tau - L_kappa.sup()[sk];
  }
  return sys;
}

namespace {

double apply_f(const ProblemSpec& spec, double s) {
  return spec.nonlinearity ? spec.nonlinearity(s) : 0.0;
}

// residual_scale: 1 for the CN system (O(1) diagonal), tau for the Rothe
// system, turning C u = rhs into the increment-form identity whose residual
// is meaningful at roundoff level.
void fill_step_record(StepRecord& rec, const TridiagonalMatrix& A,
                      const NodalField& u_next, const std::vector<double>& rhs,
                      const NodalField& u_prev, double t, double h,
                      double residual_scale) {
  rec.t = t;
  rec.h = h;
  const std::vector<double> Au = A.apply(u_next.values);
  double r = 0.0;
  for (size_t k = 0; k < rhs.size(); ++k) r = std::max(r, std::abs(Au[k] - rhs[k]));
  rec.residual = r * residual_scale;
  const double tau = u_next.grid.tau();
  NodalField delta(u_next.grid);
  for (size_t k = 0; k < delta.values.size(); ++k) {
    delta.values[k] = (u_next.values[k] - u_prev.values[k]) / tau;
  }
  rec.delta_h1_sq_tau = h1_norm_sq(delta) * tau;
  rec.grad_sq = grad_norm_sq(u_next);
}

NodalField cn_step_impl(const NodalField& state, int i, const ProblemSpec& spec,
                        double h_next, const DirectSchemeConfig& cfg,
                        StepRecord* rec) {
  const SpaceTimeGrid& g = cfg.grid;
  if (state.grid != g) throw data_error("state grid does not match scheme grid");
  detail::require_unit_rho(spec);
  const detail::CnOperators ops = detail::cn_operators(spec, g, i);
  const double tau = g.tau();

  std::vector<double> rhs = ops.B.apply(state.values);
  for (size_t k = 0; k < rhs.size(); ++k) {
    rhs[k] += tau * (apply_f(spec, state.values[k]) + ops.ft_mid[k] +
                     ops.p_mid[k] * h_next);
  }
  NodalField next(g, thomas_solve(ops.A, rhs));
  if (rec) fill_step_record(*rec, ops.A, next, rhs, state, g.t(i + 1), h_next, 1.0);
  return next;
}

NodalField rothe_step_impl(const NodalField& state, int i, const ProblemSpec& spec,
                           const NodalField& f_total_at_ti,
                           const DirectSchemeConfig& cfg, StepRecord* rec,
                           double h_for_record) {
  const SpaceTimeGrid& g = cfg.grid;
  if (state.grid != g) throw data_error("state grid does not match scheme grid");
  if (f_total_at_ti.grid != g) throw data_error("rhs grid does not match scheme grid");
  const detail::RotheSystem sys = detail::rothe_system(spec, g, i);
  const double tau = g.tau();

  std::vector<double> rhs(state.values.size());
  if (sys.eta_is_zero) {
    for (size_t k = 0; k < rhs.size(); ++k) {
      rhs[k] = f_total_at_ti.values[k] + sys.rho_prev[k] * state.values[k] / tau;
    }
  } else {
    const std::vector<double> Le_u = sys.L_eta.apply(state.values);
    for (size_t k = 0; k < rhs.size(); ++k) {
      rhs[k] = f_total_at_ti.values[k] + sys.rho_prev[k] * state.values[k] / tau -
               Le_u[k] / tau;
    }
  }
  NodalField next(g, thomas_solve(sys.C, rhs));
  if (rec) fill_step_record(*rec, sys.C, next, rhs, state, g.t(i), h_for_record, tau);
  return next;
}

}  // namespace
}  // namespace detail

NodalField cn_direct_step(const NodalField& state, int i, const ProblemSpec& spec,
                          double h_next, const DirectSchemeConfig& cfg) {
  return detail::cn_step_impl(state, i, spec, h_next, cfg, nullptr);
}

NodalField rothe_direct_step(const NodalField& state, int i, const ProblemSpec& spec,
                             const NodalField& f_total_at_ti,
                             const DirectSchemeConfig& cfg) {
  return detail::rothe_step_impl(state, i, spec, f_total_at_ti, cfg, nullptr,
                                 std::nan(""));
}

Trajectory run_direct(const ProblemSpec& spec, const TimeFn& h,
                      const DirectSchemeConfig& cfg) {
  const SpaceTimeGrid& g = cfg.grid;
  if (cfg.store_every < 1) throw data_error("store_every must be >= 1");
  if (!h) throw data_error("source factor h is not set");
  spec.validate(g);

  Trajectory traj{g, {}, {}, std::nullopt, {}};
  NodalField u(g);
  for (int k = 0; k < g.interior_count(); ++k) {
    u.values[static_cast<size_t>(k)] = spec.u0(g.x(k + 1));
  }
  traj.times.push_back(0.0);
  traj.states.push_back(u);
  traj.diagnostics.reserve(static_cast<size_t>(g.t_count()));

  for (int i = 1; i <= g.t_count(); ++i) {
    StepRecord rec;
    NodalField next(g);
    if (cfg.scheme == Scheme::CrankNicolson) {
      next = detail::cn_step_impl(u, i - 1, spec, h(g.t(i)), cfg, &rec);
    } else {
      const double ti = g.t(i);
      const double hi = h(ti);
      NodalField f_total(g);
      for (int k = 0; k < g.interior_count(); ++k) {
        const double x = g.x(k + 1);
        f_total.values[static_cast<size_t>(k)] =
            detail::apply_f(spec, u.values[static_cast<size_t>(k)]) +
            spec.f_tilde(ti, x) + spec.p(ti, x) * hi;
      }
      next = detail::rothe_step_impl(u, i, spec, f_total, cfg, &rec, hi);
    }
    u = std::move(next);
    traj.diagnostics.push_back(rec);
    if (i % cfg.store_every == 0 || i == g.t_count()) {
      traj.times.push_back(g.t(i));
      traj.states.push_back(u);
    }
  }
  return traj;
}

double discrete_energy(const Trajectory& traj) {
  if (traj.states.empty()) throw data_error("trajectory has no states");
  double e = 0.0;
  for (const StepRecord& rec : traj.diagnostics) e += rec.delta_h1_sq_tau;
  return e + h1_norm_sq(traj.states.back());
}

}  // namespace pp
