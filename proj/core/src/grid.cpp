#include "pp/grid.hpp"

#include <algorithm>
#include <cmath>

namespace pp {

SpaceTimeGrid::SpaceTimeGrid(int x_count, int t_count, double length,
                             double horizon)
    : nx_(x_count), nt_(t_count), length_(length), horizon_(horizon) {
  if (nx_ < 1) throw data_error("SpaceTimeGrid: x_count must be positive");
  if (nt_ < 0) throw data_error("SpaceTimeGrid: t_count must be non-negative");
  if (!(length_ > 0.0) || !std::isfinite(length_))
    throw data_error("SpaceTimeGrid: length must be positive and finite");
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
    throw data_error("SpaceTimeGrid: horizon must be positive and finite");
  dx_ = length_ / nx_;
  tau_ = nt_ > 0 ? horizon_ / nt_ : 0.0;
}

NodalField::NodalField(const SpaceTimeGrid& g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != g.interior_count())
    throw data_error("NodalField: value count does not match interior nodes");
}

CoefficientField::CoefficientField(SpaceTimeFn evaluator, double lower_bound,
                                   double upper_bound,
                                   std::optional<double> time_derivative_bound)
    : eval_(std::move(evaluator)),
      lower_(lower_bound),
      upper_(upper_bound),
      tdb_(time_derivative_bound) {
  if (!eval_) throw data_error("CoefficientField: missing evaluator");
  if (!(lower_ <= upper_))
    throw data_error("CoefficientField: lower_bound exceeds upper_bound");
}

void CoefficientField::validate(const SpaceTimeGrid& grid) const {
  for (int i = 0; i <= grid.t_count(); ++i) {
    const double t = grid.t(i);
    for (int j = 0; j <= grid.x_count(); ++j) {
      const double v = eval_(t, grid.x(j));
      if (std::isnan(v))
        throw data_error("CoefficientField: NaN sample in coefficient");
      if (v < lower_ || v > upper_)
        throw assumption_error(
            "CoefficientField: sampled value outside declared bounds");
    }
  }
}

void ProblemSpec::validate(const SpaceTimeGrid& grid) const {
  rho.validate(grid);
  eta.validate(grid);
  kappa.validate(grid);
  if (std::abs(u0(0.0)) > 1e-12 || std::abs(u0(length)) > 1e-12)
    throw assumption_error(
        "ProblemSpec: u0 must vanish at the boundary (Dirichlet data)");
}

double measure(const NodalField& field, const std::vector<double>& omega_samples) {
  const int nx = field.grid.x_count();
  if (static_cast<int>(omega_samples.size()) != nx + 1)
    throw data_error("measure: omega sample count does not match grid");
  double acc = 0.0;
  for (int j = 1; j < nx; ++j) acc += field.values[j - 1] * omega_samples[j];
  return field.grid.dx() * acc;
}

double measure_trapezoid(const NodalField& field,
                         const std::vector<double>& omega_samples) {
  const int nx = field.grid.x_count();
  if (static_cast<int>(omega_samples.size()) != nx + 1)
    throw data_error("measure_trapezoid: omega sample count does not match grid");
  // u_0 = u_Nx = 0, so the halved end weights contribute nothing.
  double acc = 0.5 * (0.0 * omega_samples[0]);
  for (int j = 1; j < nx; ++j) acc += field.values[j - 1] * omega_samples[j];
  acc += 0.5 * (0.0 * omega_samples[nx]);
  return field.grid.dx() * acc;
}

std::vector<double> sample_function(const SpaceTimeFn& fn, double t,
                                    const SpaceTimeGrid& grid) {
  std::vector<double> out(static_cast<size_t>(grid.interior_count()));
  for (int j = 1; j < grid.x_count(); ++j) out[j - 1] = fn(t, grid.x(j));
  return out;
}

std::vector<double> sample_omega(const ProblemSpec& spec,
                                 const SpaceTimeGrid& grid) {
  std::vector<double> out(static_cast<size_t>(grid.x_count()) + 1);
  for (int j = 0; j <= grid.x_count(); ++j) out[j] = spec.omega(grid.x(j));
  return out;
}

SpaceFn indicator_window(double a, double b) {
  return [a, b](double x) -> double {
    if (std::abs(x - a) < 1e-9 || std::abs(x - b) < 1e-9) return 0.5;
    return (a <= x && x <= b) ? 1.0 : 0.0;
  };
}

SpaceFn mollified_window(double a, double b, double width) {
  if (!(b > a)) throw data_error("mollified_window: requires b > a");
  if (!(width > 0.0)) throw data_error("mollified_window: width must be positive");
  const double w = std::min(width, 0.5 * (b - a));
  auto ramp = [](double r) {
    r = std::clamp(r, 0.0, 1.0);
    return r * r * (3.0 - 2.0 * r);
  };
  return [a, b, w, ramp](double x) -> double {
    if (x <= a || x >= b) return 0.0;
    return ramp((x - a) / w) * ramp((b - x) / w);
  };
}

double l2_norm_sq(const NodalField& v) {
  double acc = 0.0;
  for (double x : v.values) acc += x * x;
  return v.grid.dx() * acc;
}

double grad_norm_sq(const NodalField& v) {
  const double dx = v.grid.dx();
  const int n = v.grid.interior_count();
  double acc = 0.0;
  double prev = 0.0;  // u_0 = 0
  for (int k = 0; k < n; ++k) {
    const double d = (v.values[k] - prev) / dx;
    acc += d * d;
    prev = v.values[k];
  }
  const double dlast = (0.0 - prev) / dx;  // u_Nx = 0
  acc += dlast * dlast;
  return dx * acc;
}

double h1_norm_sq(const NodalField& v) { return l2_norm_sq(v) + grad_norm_sq(v); }

}  // namespace pp
