#include "pp/inverse.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "pp/errors.hpp"
#include "pp/tridiag.hpp"
#include "scheme_detail.hpp"

namespace pp {
namespace {

double quad_all(const std::vector<double>& vals, double dx) {
  double acc = 0.0;
  for (double v : vals) acc += v;
  return dx * acc;
}

// sum_k coeff_{k+1/2} (v_{k+1}-v_k)(w_{k+1}-w_k)/dx over cells; v, w at all nodes.
double grad_form(const std::vector<double>& coeff_half,
                 const std::vector<double>& v_all,
                 const std::vector<double>& w_all, double dx) {
  double acc = 0.0;
  for (size_t k = 0; k + 1 < v_all.size(); ++k) {
    acc += coeff_half[k] * (v_all[k + 1] - v_all[k]) * (w_all[k + 1] - w_all[k]);
  }
  return acc / dx;
}

std::vector<double> pad_with_zeros(const std::vector<double>& interior) {
  std::vector<double> out(interior.size() + 2, 0.0);
  for (size_t k = 0; k < interior.size(); ++k) out[k + 1] = interior[k];
  return out;
}

double apply_f(const ProblemSpec& spec, double s) {
  return spec.nonlinearity ? spec.nonlinearity(s) : 0.0;
}

void check_denominator(double den, double scale, double floor, int step, double t,
                       const char* what) {
  if (std::isnan(den)) {
    throw data_error(std::string(what) + " is NaN");
  }
  if (std::abs(den) <= floor * std::max(scale, 1e-300)) {
    throw identifiability_error(
        std::string(what) + " vanished: |" + std::to_string(den) +
            "| under relative floor; the weighted source average does not "
            "control h at this time",
        step, t);
  }
}

std::pair<NodalField, double> cn_step_impl(const NodalField& state, int i,
                                           const ProblemSpec& spec,
                                           const InverseSchemeConfig& cfg,
                                           StepRecord* rec,
                                           const std::vector<double>& omega) {
  const SpaceTimeGrid& g = cfg.grid;
  if (state.grid != g) throw data_error("state grid does not match scheme grid");
  detail::require_unit_rho(spec);
  const detail::CnOperators ops = detail::cn_operators(spec, g, i);
  const double tau = g.tau();
  const double t1 = g.t(i + 1);

  std::vector<double> rhs1 = ops.B.apply(state.values);
  for (size_t k = 0; k < rhs1.size(); ++k) {
    rhs1[k] += tau * (apply_f(spec, state.values[k]) + ops.ft_mid[k]);
  }
  std::vector<double> rhs2(ops.p_mid.size());
  for (size_t k = 0; k < rhs2.size(); ++k) rhs2[k] = tau * ops.p_mid[k];

  NodalField u1(g, thomas_solve(ops.A, rhs1));
  NodalField u2(g, thomas_solve(ops.A, rhs2));

  const double den = measure(u2, omega);
  // Scale of a healthy denominator: tau * quadrature of |p_mid| |omega|.
  double scale_acc = 0.0;
  for (int j = 0; j <= g.x_count(); ++j) {
    const double x = g.x(j);
    const double pm = 0.5 * (spec.p(g.t(i), x) + spec.p(t1, x));
    scale_acc += std::abs(pm * omega[static_cast<size_t>(j)]);
  }
  const double scale = g.dx() * scale_acc * tau;
  check_denominator(den, scale, cfg.denominator_floor, i + 1, t1,
                    "CN recovery denominator");

  const double h = (spec.measurement(t1) - measure(u1, omega)) / den;
  NodalField next(g);
  for (size_t k = 0; k < next.values.size(); ++k) {
    next.values[k] = u1.values[k] + h * u2.values[k];
  }
  if (rec) {
    rec->t = t1;
    rec->h = h;
    rec->denominator = den;
    const std::vector<double> Au = ops.A.apply(next.values);
    double r = 0.0;
    for (size_t k = 0; k < Au.size(); ++k) {
      r = std::max(r, std::abs(Au[k] - (rhs1[k] + rhs2[k] * h)));
    }
    rec->residual = r;
    NodalField delta(g);
    for (size_t k = 0; k < delta.values.size(); ++k) {
      delta.values[k] = (next.values[k] - state.values[k]) / tau;
    }
    rec->delta_h1_sq_tau = h1_norm_sq(delta) * tau;
    rec->grad_sq = grad_norm_sq(next);
  }
  return {std::move(next), h};
}

std::pair<NodalField, double> rothe_step_impl(const NodalField& state, int i,
                                              const ProblemSpec& spec,
                                              const InverseSchemeConfig& cfg,
                                              StepRecord* rec,
                                              const std::vector<double>& omega) {
  const SpaceTimeGrid& g = cfg.grid;
  if (state.grid != g) throw data_error("state grid does not match scheme grid");
  if (!spec.measurement_derivative || !*spec.measurement_derivative) {
    throw data_error("Rothe inverse scheme requires measurement_derivative");
  }
  const detail::RotheSystem sys = detail::rothe_system(spec, g, i);
  const double tau = g.tau();
  const double dx = g.dx();
  const double t = g.t(i);
  const int m = g.interior_count();
  const int n_all = g.x_count() + 1;

  std::vector<double> rho_all(static_cast<size_t>(n_all));
  std::vector<double> p_all(static_cast<size_t>(n_all));
  std::vector<double> w_all(static_cast<size_t>(n_all));
  for (int j = 0; j < n_all; ++j) {
    const double x = g.x(j);
    rho_all[static_cast<size_t>(j)] = spec.rho(t, x);
    p_all[static_cast<size_t>(j)] = spec.p(t, x);
    w_all[static_cast<size_t>(j)] = omega[static_cast<size_t>(j)] / rho_all[static_cast<size_t>(j)];
  }

  std::vector<double> pw(static_cast<size_t>(n_all));
  double scale_acc = 0.0;
  for (int j = 0; j < n_all; ++j) {
    pw[static_cast<size_t>(j)] = p_all[static_cast<size_t>(j)] * w_all[static_cast<size_t>(j)];
    scale_acc += std::abs(pw[static_cast<size_t>(j)]);
  }
  const double omega_bar = quad_all(pw, dx);
  check_denominator(omega_bar, dx * scale_acc, cfg.denominator_floor, i, t,
                    "weighted source average omega_bar");

  // s_k = (eta_{k-1/2} dw_{k-1} - eta_{k+1/2} dw_k)/dx represents the eta
  // gradient form against omega/rho on interior test vectors; sk likewise
  // for kappa.
  std::vector<double> s(static_cast<size_t>(m));
  std::vector<double> sk(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double dwl = w_all[static_cast<size_t>(k + 1)] - w_all[static_cast<size_t>(k)];
    const double dwr = w_all[static_cast<size_t>(k + 2)] - w_all[static_cast<size_t>(k + 1)];
    s[static_cast<size_t>(k)] =
        (sys.eta_half[static_cast<size_t>(k)] * dwl -
         sys.eta_half[static_cast<size_t>(k + 1)] * dwr) / dx;
    sk[static_cast<size_t>(k)] =
        (sys.kappa_half[static_cast<size_t>(k)] * dwl -
         sys.kappa_half[static_cast<size_t>(k + 1)] * dwr) / dx;
  }

  const std::vector<double> u_all = pad_with_zeros(state.values);
  std::vector<double> rho_prev_all(static_cast<size_t>(n_all));
  rho_prev_all[0] = spec.rho(t - tau, 0.0);
  rho_prev_all[static_cast<size_t>(n_all - 1)] = spec.rho(t - tau, g.length());
  for (int k = 0; k < m; ++k) {
    rho_prev_all[static_cast<size_t>(k + 1)] = sys.rho_prev[static_cast<size_t>(k)];
  }

  std::vector<double> rho_term_vals(static_cast<size_t>(n_all));
  for (int j = 0; j < n_all; ++j) {
    const size_t sj = static_cast<size_t>(j);
    const double drho = (rho_all[sj] - rho_prev_all[sj]) / tau;
    rho_term_vals[sj] = u_all[sj] * omega[sj] * drho / rho_all[sj];
  }
  const double rho_term = quad_all(rho_term_vals, dx);

  std::vector<double> src_vals(static_cast<size_t>(n_all));
  for (int j = 0; j < n_all; ++j) {
    const size_t sj = static_cast<size_t>(j);
    src_vals[sj] = (apply_f(spec, u_all[sj]) + spec.f_tilde(t, g.x(j))) * w_all[sj];
  }
  const double src_w = quad_all(src_vals, dx);

  double G_eta_uprev = 0.0;
  double G_kappa_uprev = 0.0;
  for (int k = 0; k < m; ++k) {
    G_eta_uprev += s[static_cast<size_t>(k)] * state.values[static_cast<size_t>(k)];
    G_kappa_uprev += sk[static_cast<size_t>(k)] * state.values[static_cast<size_t>(k)];
  }

  const double mp = (*spec.measurement_derivative)(t);
  const double known = mp + rho_term - G_eta_uprev / tau + G_kappa_uprev - src_w;

  std::vector<double> rhs(static_cast<size_t>(m));
  const std::vector<double> Le_u =
      sys.eta_is_zero ? std::vector<double>(static_cast<size_t>(m), 0.0)
                      : sys.L_eta.apply(state.values);
  std::vector<double> ucol(static_cast<size_t>(m));
  std::vector<double> vrow(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    const size_t sk_ = static_cast<size_t>(k);
    const double x = g.x(k + 1);
    const double p_int = spec.p(t, x);
    rhs[sk_] = apply_f(spec, state.values[sk_]) + spec.f_tilde(t, x) +
               sys.rho_prev[sk_] * state.values[sk_] / tau - Le_u[sk_] / tau +
               p_int * known / omega_bar;
    ucol[sk_] = p_int;
    vrow[sk_] = -s[sk_] / (tau * omega_bar);
  }

  NodalField next(g);
  try {
    next = NodalField(g, rank_one_solve(sys.C, ucol, vrow, rhs));
  } catch (const identifiability_error& e) {
    throw identifiability_error(e.what(), i, t);
  }

  std::vector<double> du_all(static_cast<size_t>(n_all), 0.0);
  for (int k = 0; k < m; ++k) {
    du_all[static_cast<size_t>(k + 1)] =
        (next.values[static_cast<size_t>(k)] - state.values[static_cast<size_t>(k)]) / tau;
  }
  const double h = (mp + rho_term + grad_form(sys.eta_half, du_all, w_all, dx) +
                    grad_form(sys.kappa_half, u_all, w_all, dx) - src_w) / omega_bar;

  if (rec) {
    rec->t = t;
    rec->h = h;
    rec->denominator = omega_bar;
    // Residual against the direct-step system C u = g + p h (resubstitution).
    const std::vector<double> Cu = sys.C.apply(next.values);
    double r = 0.0;
    for (size_t k = 0; k < Cu.size(); ++k) {
      const double target = rhs[k] + ucol[k] * (h - known / omega_bar);
      r = std::max(r, std::abs(Cu[k] - target));
    }
    rec->residual = r * tau;
    NodalField delta(g);
    for (size_t k = 0; k < delta.values.size(); ++k) {
      delta.values[k] = du_all[k + 1];
    }
    rec->delta_h1_sq_tau = h1_norm_sq(delta) * tau;
    rec->grad_sq = grad_norm_sq(next);
  }
  return {std::move(next), h};
}

}  // namespace

std::vector<double> effective_omega(const ProblemSpec& spec,
                                    const InverseSchemeConfig& cfg) {
  const SpaceTimeGrid& g = cfg.grid;
  if (cfg.scheme == InverseScheme::RotheCoupled && spec.omega_window) {
    const double width = cfg.omega_mollify_width.value_or(4.0 * g.dx());
    if (width < 0.0) throw data_error("omega_mollify_width must be >= 0");
    if (width > 0.0) {
      const SpaceFn w = mollified_window(spec.omega_window->first,
                                         spec.omega_window->second, width);
      std::vector<double> out(static_cast<size_t>(g.x_count()) + 1);
      for (int j = 0; j <= g.x_count(); ++j) out[static_cast<size_t>(j)] = w(g.x(j));
      return out;
    }
  }
  return sample_omega(spec, g);
}

std::pair<NodalField, double> cn_inverse_step(const NodalField& state, int i,
                                              const ProblemSpec& spec,
                                              const InverseSchemeConfig& cfg) {
  return cn_step_impl(state, i, spec, cfg, nullptr, effective_omega(spec, cfg));
}

std::pair<NodalField, double> rothe_inverse_step(const NodalField& state, int i,
                                                 const ProblemSpec& spec,
                                                 const InverseSchemeConfig& cfg) {
  return rothe_step_impl(state, i, spec, cfg, nullptr, effective_omega(spec, cfg));
}

Trajectory run_inverse(const ProblemSpec& spec, const InverseSchemeConfig& cfg) {
  const SpaceTimeGrid& g = cfg.grid;
  if (cfg.store_every < 1) throw data_error("store_every must be >= 1");
  if (!spec.measurement) throw data_error("measurement m is not set");
  spec.validate(g);
  const std::vector<double> omega = effective_omega(spec, cfg);

  Trajectory traj{g, {}, {}, std::vector<double>{}, {}};
  NodalField u(g);
  for (int k = 0; k < g.interior_count(); ++k) {
    u.values[static_cast<size_t>(k)] = spec.u0(g.x(k + 1));
  }
  traj.times.push_back(0.0);
  traj.states.push_back(u);
  traj.source_values->reserve(static_cast<size_t>(g.t_count()));
  traj.diagnostics.reserve(static_cast<size_t>(g.t_count()));

  for (int i = 1; i <= g.t_count(); ++i) {
    StepRecord rec;
    std::pair<NodalField, double> step{NodalField(g), 0.0};
    if (cfg.scheme == InverseScheme::CnSplitting) {
      step = cn_step_impl(u, i - 1, spec, cfg, &rec, omega);
    } else {
      step = rothe_step_impl(u, i, spec, cfg, &rec, omega);
    }
    u = std::move(step.first);
    traj.source_values->push_back(step.second);
    traj.diagnostics.push_back(rec);
    if (i % cfg.store_every == 0 || i == g.t_count()) {
      traj.times.push_back(g.t(i));
      traj.states.push_back(u);
    }
  }
  return traj;
}

MeasurementTable measurement_from_trajectory(const Trajectory& traj,
                                             const ProblemSpec& spec,
                                             const InverseSchemeConfig& cfg) {
  const SpaceTimeGrid& g = traj.grid;
  if (cfg.grid != g) throw data_error("config grid does not match trajectory grid");
  const int nt = g.t_count();
  if (static_cast<int>(traj.states.size()) != nt + 1) {
    throw data_error("measurement_from_trajectory needs every state stored");
  }
  const std::vector<double> omega = effective_omega(spec, cfg);
  const double tau = g.tau();
  const double dx = g.dx();

  MeasurementTable tab;
  tab.m.resize(static_cast<size_t>(nt) + 1);
  tab.m_prime.assign(static_cast<size_t>(nt) + 1, 0.0);
  for (int i = 0; i <= nt; ++i) {
    tab.m[static_cast<size_t>(i)] = measure(traj.states[static_cast<size_t>(i)], omega);
  }
  for (int i = 1; i <= nt; ++i) {
    const double t = g.t(i);
    const std::vector<double> kh = detail::half_node_samples(spec.kappa, t, g);
    std::vector<double> w_all(omega.size());
    for (int j = 0; j <= g.x_count(); ++j) {
      w_all[static_cast<size_t>(j)] = omega[static_cast<size_t>(j)] / spec.rho(t, g.x(j));
    }
    std::vector<double> du_all(omega.size(), 0.0);
    const NodalField& ui = traj.states[static_cast<size_t>(i)];
    const NodalField& up = traj.states[static_cast<size_t>(i - 1)];
    for (int k = 0; k < g.interior_count(); ++k) {
      du_all[static_cast<size_t>(k + 1)] =
          (ui.values[static_cast<size_t>(k)] - up.values[static_cast<size_t>(k)]) / tau;
    }
    const double backward =
        (tab.m[static_cast<size_t>(i)] - tab.m[static_cast<size_t>(i - 1)]) / tau;
    tab.m_prime[static_cast<size_t>(i)] = backward + tau * grad_form(kh, du_all, w_all, dx);
  }
  return tab;
}

TimeFn tabulated_time_function(std::vector<double> values,
                               const SpaceTimeGrid& grid) {
  if (static_cast<int>(values.size()) != grid.t_count() + 1) {
    throw data_error("tabulated values must have one entry per time node");
  }
  const double tau = grid.tau();
  const int nt = grid.t_count();
  return [values = std::move(values), tau, nt](double t) {
    const double pos = tau > 0.0 ? t / tau : 0.0;
    const long i = std::lround(pos);
    if (i < 0 || i > nt || std::abs(pos - static_cast<double>(i)) > 1e-6) {
      throw data_error("tabulated measurement queried off the time grid");
    }
    return values[static_cast<size_t>(i)];
  };
}

}  // namespace pp
