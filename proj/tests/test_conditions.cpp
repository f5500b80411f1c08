#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "pp/cases.hpp"
#include "pp/conditions.hpp"
#include "pp/errors.hpp"
#include "pp/grid.hpp"

using namespace pp;

namespace {
const double kPi = std::acos(-1.0);

bool has_note(const ConditionReport& rep, const std::string& needle) {
  for (const std::string& n : rep.notes) {
    if (n.find(needle) != std::string::npos) return true;
  }
  return false;
}
}  // namespace

TEST_CASE("case 1 report on a 100 x 10 grid") {
  ManufacturedCase c1 = case1();
  SpaceTimeGrid g(100, 10, 1.0, c1.horizon);
  ConditionReport rep = evaluate_conditions(c1.spec, g);

  CHECK(rep.passes.bounds_ok);
  CHECK(rep.passes.positivity_ok);
  CHECK(rep.passes.u0_compatible);
  CHECK_FALSE(rep.passes.as9);
  CHECK_FALSE(rep.passes.smallness);

  // p(0, x) = 0, so omega_bar(0) is exactly zero and grows linearly with
  // slope pi cos(0.2 pi) up to quadrature error.
  REQUIRE(rep.omega_bar.size() == 11);
  CHECK(rep.omega_bar[0] == 0.0);
  CHECK(rep.omega_bar_min == 0.0);
  CHECK(rep.omega_bar[1] / g.t(1) == doctest::Approx(kPi * std::cos(0.2 * kPi)).epsilon(2e-3));
  CHECK(rep.omega_bar[1] / g.t(1) == doctest::Approx(2.541393).epsilon(1e-5));

  CHECK(rep.gradient_sup == doctest::Approx(8.660254038).epsilon(1e-8));
  CHECK(rep.p_norm == doctest::Approx(6.978864200).epsilon(1e-8));
  CHECK(rep.zeta_lhs == doctest::Approx(4.5660511422e+30).epsilon(1e-9));

  CHECK(has_note(rep, "AS-(9) violated at t=0"));
  CHECK(has_note(rep, "omega_bar_min = 0"));
  CHECK(has_note(rep, "dx^(-1/2)"));
  CHECK(has_note(rep, "kappa lower bound is 0"));
}

TEST_CASE("case 2 also starts with a vanishing weighted source average") {
  ManufacturedCase c2 = case2();
  SpaceTimeGrid g(100, 10, 1.0, c2.horizon);
  ConditionReport rep = evaluate_conditions(c2.spec, g);
  CHECK(rep.omega_bar[0] == 0.0);
  CHECK_FALSE(rep.passes.as9);
  CHECK(has_note(rep, "AS-(9) violated at t=0"));
  CHECK(std::isfinite(rep.zeta_lhs));
}

TEST_CASE("zeta scales exactly quadratically under p -> eps p") {
  // Both built-in cases have omega_bar_min = 0, so the floored denominator
  // does not scale with eps and the homogeneity in p_norm^2 is exact.
  for (int which : {1, 2}) {
    ManufacturedCase mc = which == 1 ? case1() : case2();
    SpaceTimeGrid g(100, 10, 1.0, mc.horizon);
    ConditionReport base = evaluate_conditions(mc.spec, g);
    for (double eps : {0.5, 0.3}) {
      ProblemSpec scaled = mc.spec;
      const SpaceTimeFn p0 = mc.spec.p;
      scaled.p = [p0, eps](double t, double x) { return eps * p0(t, x); };
      ConditionReport rep = evaluate_conditions(scaled, g);
      CHECK(std::abs(rep.zeta_lhs - eps * eps * base.zeta_lhs) <=
            1e-12 * eps * eps * base.zeta_lhs);
    }
  }
}

TEST_CASE("zeta is invariant under omega -> c omega when omega_bar_min > 0") {
  // Needs a source profile that does not vanish at t = 0, so no floor is
  // involved, and a constant density so M scales linearly in c.
  ManufacturedCase c1 = case1();
  ProblemSpec spec = c1.spec;
  spec.p = [](double, double x) { return std::sin(kPi * x); };
  SpaceTimeGrid g(100, 10, 1.0, c1.horizon);
  ConditionReport base = evaluate_conditions(spec, g);
  REQUIRE(base.omega_bar_min > 0.0);

  ProblemSpec scaled = spec;
  const SpaceFn om = spec.omega;
  scaled.omega = [om](double x) { return 2.5 * om(x); };
  ConditionReport rep = evaluate_conditions(scaled, g);
  CHECK(std::abs(rep.zeta_lhs - base.zeta_lhs) <= 1e-12 * base.zeta_lhs);
  CHECK(rep.omega_bar_min == doctest::Approx(2.5 * base.omega_bar_min).epsilon(1e-14));
  CHECK(rep.gradient_sup == doctest::Approx(2.5 * base.gradient_sup).epsilon(1e-14));
}

TEST_CASE("gradient sup: stable for the smooth window, dx^(-1/2) for the indicator") {
  double smooth_m[2];
  int idx = 0;
  for (int nx : {100, 400}) {
    ManufacturedCase sm = case1_smooth(nx);
    SpaceTimeGrid g(nx, 10, 1.0, sm.horizon);
    ConditionReport rep = evaluate_conditions(sm.spec, g);
    smooth_m[idx++] = rep.gradient_sup;
    CHECK_FALSE(has_note(rep, "dx^(-1/2)"));
  }
  CHECK(smooth_m[0] == doctest::Approx(2.862695381).epsilon(1e-8));
  CHECK(smooth_m[1] == doctest::Approx(2.867542039).epsilon(1e-8));
  CHECK(std::abs(smooth_m[1] - smooth_m[0]) / smooth_m[0] < 0.02);

  ManufacturedCase c1 = case1();
  double rough_m[2];
  idx = 0;
  for (int nx : {100, 400}) {
    SpaceTimeGrid g(nx, 10, 1.0, c1.horizon);
    rough_m[idx++] = evaluate_conditions(c1.spec, g).gradient_sup;
  }
  CHECK(rough_m[1] / rough_m[0] == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("violations flip flags without stopping the evaluation") {
  ManufacturedCase c1 = case1();
  SpaceTimeGrid g(50, 5, 1.0, c1.horizon);

  SUBCASE("coefficient leaving its declared bounds") {
    ProblemSpec spec = c1.spec;
    // claims kappa <= 1 but the horizon is 2
    spec.kappa = CoefficientField([](double t, double) { return t; }, 0.0, 1.0, 1.0);
    ConditionReport rep = evaluate_conditions(spec, g);
    CHECK_FALSE(rep.passes.bounds_ok);
    CHECK(has_note(rep, "leaves its declared bounds"));
  }

  SUBCASE("nonpositive eta makes zeta unevaluable") {
    ProblemSpec spec = c1.spec;
    spec.eta = CoefficientField([](double, double) { return 0.0; }, 0.0, 0.0, 0.0);
    ConditionReport rep = evaluate_conditions(spec, g);
    CHECK_FALSE(rep.passes.positivity_ok);
    CHECK(std::isnan(rep.zeta_lhs));
    CHECK_FALSE(rep.passes.smallness);
    CHECK(has_note(rep, "zeta_lhs not computable"));
  }

  SUBCASE("u0 not vanishing at the boundary") {
    ProblemSpec spec = c1.spec;
    spec.u0 = [](double x) { return std::cos(kPi * x); };
    ConditionReport rep = evaluate_conditions(spec, g);
    CHECK_FALSE(rep.passes.u0_compatible);
    CHECK(has_note(rep, "u0 does not vanish"));
  }
}

TEST_CASE("non-finite or degenerate data is a hard error") {
  ManufacturedCase c1 = case1();
  SpaceTimeGrid g(20, 4, 1.0, c1.horizon);

  ProblemSpec nan_p = c1.spec;
  nan_p.p = [](double t, double x) {
    return (t > 1.0 && x > 0.5) ? std::nan("") : 0.0;
  };
  CHECK_THROWS_AS(evaluate_conditions(nan_p, g), data_error);

  ProblemSpec zero_rho = c1.spec;
  zero_rho.rho = CoefficientField(
      [](double, double x) { return x == 0.5 ? 0.0 : 1.0; }, 0.0, 1.0, 0.0);
  CHECK_THROWS_AS(evaluate_conditions(zero_rho, g), data_error);
}

TEST_CASE("interpretation report rendering") {
  ConditionReport rep;
  rep.omega_bar = {0.3, 0.4};
  rep.omega_bar_min = 0.3;
  rep.gradient_sup = 2.0;
  rep.p_norm = 1.0;
  rep.zeta_lhs = 0.5;
  rep.passes = {true, true, true, true, true};

  std::string text = check_interpretation_report(rep);
  CHECK(text.find("margin: zeta_lhs = 0.5 < 1") != std::string::npos);
  CHECK(text.find("smallness condition satisfied") != std::string::npos);
  CHECK(text.find("source profile size") != std::string::npos);
  CHECK(text.find("coefficient ratio") != std::string::npos);
  CHECK(text.find("measurement weight quality") != std::string::npos);
  CHECK(text.find("as9=yes") != std::string::npos);

  rep.zeta_lhs = 2.0;
  rep.passes.smallness = false;
  text = check_interpretation_report(rep);
  CHECK(text.find("NOT satisfied (zeta_lhs = 2 >= 1)") != std::string::npos);

  rep.zeta_lhs = std::nan("");
  rep.omega_bar_min = 0.0;
  text = check_interpretation_report(rep);
  CHECK(text.find("not evaluable") != std::string::npos);
  CHECK(text.find("M/omega_bar_min = inf") != std::string::npos);
}
