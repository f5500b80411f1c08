#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "pp/errors.hpp"

namespace pp {

using SpaceTimeFn = std::function<double(double, double)>;  // (t, x)
using SpaceFn = std::function<double(double)>;
using TimeFn = std::function<double(double)>;

// Uniform grid on [0, length] x [0, horizon]: x_j = j*dx for j = 0..x_count,
// t_i = i*tau for i = 0..t_count. t_count = 0 is permitted and means "no time
// stepping" (used for initial-state-only trajectories); tau is then 0.
class SpaceTimeGrid {
 public:
  SpaceTimeGrid(int x_count, int t_count, double length = 1.0,
                double horizon = 1.0);

  int x_count() const { return nx_; }
  int t_count() const { return nt_; }
  double length() const { return length_; }
  double horizon() const { return horizon_; }
  double dx() const { return dx_; }
  double tau() const { return tau_; }
  double x(int j) const { return j * dx_; }
  double t(int i) const { return i * tau_; }
  int interior_count() const { return nx_ - 1; }

  bool operator==(const SpaceTimeGrid&) const = default;

 private:
  int nx_;
  int nt_;
  double length_;
  double horizon_;
  double dx_;
  double tau_;
};

// Interior nodal values u_1..u_{Nx-1}. Boundary values are implicitly zero
// (homogeneous Dirichlet) and are never stored.
struct NodalField {
  SpaceTimeGrid grid;
  std::vector<double> values;  // length grid.interior_count()

  explicit NodalField(const SpaceTimeGrid& g)
      : grid(g), values(static_cast<size_t>(g.interior_count()), 0.0) {}
  NodalField(const SpaceTimeGrid& g, std::vector<double> v);
};

// Coefficient with user-declared bounds. The bounds are not derived
// symbolically; validate(grid) samples every node (t_i, x_j) and checks
// lower <= value <= upper (assumption_error on violation, data_error on NaN).
class CoefficientField {
 public:
  CoefficientField(SpaceTimeFn evaluator, double lower_bound,
                   double upper_bound,
                   std::optional<double> time_derivative_bound = {});

  double operator()(double t, double x) const { return eval_(t, x); }
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }
  const std::optional<double>& time_derivative_bound() const { return tdb_; }
  void validate(const SpaceTimeGrid& grid) const;

 private:
  SpaceTimeFn eval_;
  double lower_;
  double upper_;
  std::optional<double> tdb_;
};

// Full problem data: rho*du/dt - d/dx(eta * d(du/dt)/dx) - d/dx(kappa du/dx)
//   = f(u) + f_tilde + p*h    on (0,length) x (0,horizon],
// u = 0 at x = 0, length; u(0,x) = u0(x); measurement: integral of u*omega
// over (0,length) equals m(t).
struct ProblemSpec {
  CoefficientField rho;
  CoefficientField eta;
  CoefficientField kappa;
  std::function<double(double)> nonlinearity;  // f(s)
  double lipschitz_f = 0.0;                    // declared constant for f
  bool lipschitz_local_only = true;
  SpaceTimeFn p;
  SpaceTimeFn f_tilde;
  SpaceFn u0;
  SpaceFn omega;
  TimeFn measurement;                                // m(t)
  std::optional<TimeFn> measurement_derivative;      // m'(t), Rothe inverse only
  // Set when omega is an indicator window [a, b]; lets the Rothe inverse
  // scheme substitute a C1 mollified window of the same support.
  std::optional<std::pair<double, double>> omega_window;
  double length = 1.0;

  // Coefficient bounds on the grid plus Dirichlet compatibility of u0
  // (|u0(0)|, |u0(length)| <= 1e-12).
  void validate(const SpaceTimeGrid& grid) const;
};

// dx * sum_{j=1}^{Nx-1} u_j * omega_samples[j]. Boundary summands vanish with
// Dirichlet data. Strict left-to-right accumulation: bit-reproducible.
double measure(const NodalField& field, const std::vector<double>& omega_samples);

// Trapezoid variant (boundary weights halved). Coincides with measure here
// because the boundary values are zero; exposed as the non-default option.
double measure_trapezoid(const NodalField& field,
                         const std::vector<double>& omega_samples);

// fn(t, x_j) at interior nodes j = 1..Nx-1, in index order.
std::vector<double> sample_function(const SpaceTimeFn& fn, double t,
                                    const SpaceTimeGrid& grid);

// omega(x_j) for j = 0..Nx (all nodes).
std::vector<double> sample_omega(const ProblemSpec& spec,
                                 const SpaceTimeGrid& grid);

// Indicator of [a, b] with value 1/2 on the jump abscissae (|x-a| or |x-b|
// below 1e-9). The midpoint convention keeps the uniform-sum quadrature of
// window weights second-order accurate.
SpaceFn indicator_window(double a, double b);

// C1 window on [a, b]: smoothstep ramps of the given width inside the
// interval, identically 1 in the middle, 0 outside. Used by the Rothe
// inverse scheme in place of indicator windows.
SpaceFn mollified_window(double a, double b, double width);

// Discrete norms (interior field, implicit zero boundary).
double l2_norm_sq(const NodalField& v);    // dx * sum v_j^2
double grad_norm_sq(const NodalField& v);  // dx * sum ((v_{j+1}-v_j)/dx)^2 over cells
double h1_norm_sq(const NodalField& v);    // l2_norm_sq + grad_norm_sq

}  // namespace pp
