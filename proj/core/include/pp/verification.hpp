#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "pp/cases.hpp"
#include "pp/direct.hpp"

namespace pp {

// Errors of a trajectory against the case's exact pair, one row per stored
// state. h_abs_err is NaN at t = 0 and everywhere for direct runs (no
// recovered h). The final relative errors are normalised by the max of the
// exact quantity (u over the final-time nodes, h over all steps).
struct ErrorTable {
  std::vector<double> times;
  std::vector<double> u_max_err;
  std::vector<double> u_l2_err;
  std::vector<double> h_abs_err;
  double final_rel_err_u = 0.0;
  double final_rel_err_h = 0.0;  // NaN for direct runs
};

ErrorTable compute_errors(const Trajectory& traj, const ManufacturedCase& mc);

struct ConvergenceRow {
  int nx = 0;
  int nt = 0;
  double u_final_max_err = 0.0;
  double h_max_err = 0.0;  // NaN for direct runs
  double order_u = 0.0;    // log2(err_prev/err_this); NaN on the first row
  double order_h = 0.0;
};

// Runs the case on each (nx, nt) and tabulates final-time u errors, h errors
// and observed orders between consecutive rows. `runner`, when set, replaces
// the built-in run and must return (u_final_max_err, h_max_err) — used to
// inject exact data (orders then hit 0/0 and surface as NaN sentinels).
std::vector<ConvergenceRow> convergence_study(
    const ManufacturedCase& mc, const std::vector<std::pair<int, int>>& grids,
    Scheme scheme, bool inverse,
    const std::function<std::pair<double, double>(int, int)>& runner = {});

}  // namespace pp
