#include "pp/verification.hpp"

#include <cmath>
#include <cstddef>

#include "pp/errors.hpp"
#include "pp/inverse.hpp"

namespace pp {
namespace {

double max_abs_exact_u(const ManufacturedCase& mc, const SpaceTimeGrid& g, double t) {
  double m = 0.0;
  for (int k = 0; k < g.interior_count(); ++k) {
    m = std::max(m, std::abs(mc.exact_u(t, g.x(k + 1))));
  }
  return m;
}

}  // namespace

ErrorTable compute_errors(const Trajectory& traj, const ManufacturedCase& mc) {
  const SpaceTimeGrid& g = traj.grid;
  if (traj.states.empty()) throw data_error("trajectory has no states");
  ErrorTable tab;
  const double tau = g.tau();

  for (size_t s = 0; s < traj.states.size(); ++s) {
    const double t = traj.times[s];
    const NodalField& u = traj.states[s];
    double emax = 0.0;
    bool has_nan = false;
    NodalField diff(g);
    for (int k = 0; k < g.interior_count(); ++k) {
      const double d = u.values[static_cast<size_t>(k)] - mc.exact_u(t, g.x(k + 1));
      diff.values[static_cast<size_t>(k)] = d;
      if (std::isnan(d)) has_nan = true;
      emax = std::max(emax, std::abs(d));
    }
    if (has_nan) emax = std::nan("");
    tab.times.push_back(t);
    tab.u_max_err.push_back(emax);
    tab.u_l2_err.push_back(std::sqrt(l2_norm_sq(diff)));

    double herr = std::nan("");
    if (traj.source_values && s > 0 && tau > 0.0) {
      const long i = std::lround(t / tau);
      if (i >= 1 && i <= static_cast<long>(traj.source_values->size())) {
        herr = std::abs((*traj.source_values)[static_cast<size_t>(i - 1)] -
                        mc.exact_h(t));
      }
    }
    tab.h_abs_err.push_back(herr);
  }

  const double u_scale = max_abs_exact_u(mc, g, traj.times.back());
  tab.final_rel_err_u =
      u_scale > 0.0 ? tab.u_max_err.back() / u_scale : tab.u_max_err.back();

  if (traj.source_values && !traj.source_values->empty() && tau > 0.0) {
    double herr_max = 0.0;
    double h_scale = 0.0;
    for (size_t i = 0; i < traj.source_values->size(); ++i) {
      const double t = g.t(static_cast<int>(i) + 1);
      herr_max = std::max(herr_max,
                          std::abs((*traj.source_values)[i] - mc.exact_h(t)));
      h_scale = std::max(h_scale, std::abs(mc.exact_h(t)));
    }
    tab.final_rel_err_h = h_scale > 0.0 ? herr_max / h_scale : herr_max;
  } else {
    tab.final_rel_err_h = std::nan("");
  }
  return tab;
}

std::vector<ConvergenceRow> convergence_study(
    const ManufacturedCase& mc, const std::vector<std::pair<int, int>>& grids,
    Scheme scheme, bool inverse,
    const std::function<std::pair<double, double>(int, int)>& runner) {
  std::vector<ConvergenceRow> rows;
  rows.reserve(grids.size());
  for (const auto& [nx, nt] : grids) {
    double u_err = 0.0;
    double h_err = std::nan("");
    if (runner) {
      const auto [ue, he] = runner(nx, nt);
      u_err = ue;
      h_err = he;
    } else {
      const SpaceTimeGrid g(nx, nt, mc.spec.length, mc.horizon);
      if (inverse) {
        InverseSchemeConfig cfg{scheme == Scheme::CrankNicolson
                                    ? InverseScheme::CnSplitting
                                    : InverseScheme::RotheCoupled,
                                g, 1, 1e-12, {}};
        const Trajectory traj = run_inverse(mc.spec, cfg);
        const ErrorTable tab = compute_errors(traj, mc);
        u_err = tab.u_max_err.back();
        double hm = 0.0;
        for (size_t i = 0; i < traj.source_values->size(); ++i) {
          hm = std::max(hm, std::abs((*traj.source_values)[i] -
                                     mc.exact_h(g.t(static_cast<int>(i) + 1))));
        }
        h_err = hm;
      } else {
        DirectSchemeConfig cfg{scheme, g, 1};
        const Trajectory traj = run_direct(mc.spec, mc.exact_h, cfg);
        const ErrorTable tab = compute_errors(traj, mc);
        u_err = tab.u_max_err.back();
      }
    }
    ConvergenceRow row{nx, nt, u_err, h_err, std::nan(""), std::nan("")};
    if (!rows.empty()) {
      row.order_u = std::log2(rows.back().u_final_max_err / u_err);
      row.order_h = std::log2(rows.back().h_max_err / h_err);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pp
