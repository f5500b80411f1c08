#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "pp/cases.hpp"
#include "pp/direct.hpp"
#include "pp/errors.hpp"
#include "pp/inverse.hpp"
#include "pp/verification.hpp"

using namespace pp;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("case 1 data") {
  ManufacturedCase c1 = case1();
  CHECK(c1.name == "case1");
  CHECK(c1.horizon == 2.0);
  CHECK(c1.exact_u(0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c1.exact_h(0.0) == 1.0);
  CHECK(c1.exact_h(1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  // m(t) = c e^t, so consecutive ratios are exactly exponential
  CHECK(c1.spec.measurement(1.0) / c1.spec.measurement(0.0) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(c1.spec.measurement(0.0) ==
        doctest::Approx((std::cos(0.2 * kPi) - std::cos(0.8 * kPi)) / kPi)
            .epsilon(1e-15));
  CHECK(c1.spec.omega_window.has_value());
  CHECK(c1.spec.omega_window->first == 0.2);
  CHECK(std::abs(manufactured_residual(c1, 1.0, 0.3)) <= 1e-8);
  CHECK_NOTHROW(check_manufactured(c1));
}

TEST_CASE("case 2 data") {
  ManufacturedCase c2 = case2();
  CHECK(c2.name == "case2");
  CHECK(c2.horizon == 1.0);
  CHECK(c2.exact_h(0.25) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c2.exact_h(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  const double c_ex = (std::cos(0.4 * kPi) - std::cos(0.6 * kPi)) / kPi;
  CHECK(c2.spec.measurement(0.0) == doctest::Approx(c_ex).epsilon(1e-15));
  CHECK(std::abs(c_ex - 0.1967) < 5e-5);  // the rounded tabulated constant
  CHECK(std::abs(manufactured_residual(c2, 0.7, 0.45)) <= 1e-8);
  CHECK_NOTHROW(check_manufactured(c2));
}

TEST_CASE("rounded-measurement variants") {
  ManufacturedCase r1 = case1(true);
  CHECK(r1.name == "case1-rounded-m");
  CHECK(r1.spec.measurement(0.0) == 0.514);
  CHECK(r1.spec.measurement(1.0) == doctest::Approx(0.514 * std::exp(1.0)).epsilon(1e-15));

  ManufacturedCase r2 = case2(true);
  CHECK(r2.name == "case2-rounded-m");
  CHECK(r2.spec.measurement(0.0) == 0.1967);
  REQUIRE(r2.spec.measurement_derivative.has_value());
  CHECK((*r2.spec.measurement_derivative)(0.0) == 0.0);

  // the exact pair is unchanged; only the tabulated m is perturbed
  CHECK(r1.exact_h(0.5) == case1().exact_h(0.5));
}

TEST_CASE("smooth-window variants are measurement-consistent on their grid") {
  for (int nx : {100, 400}) {
    ManufacturedCase sm = case2_smooth(nx);
    CHECK(sm.name == "case2-smooth");
    CHECK_FALSE(sm.spec.omega_window.has_value());
    SpaceTimeGrid g(nx, 1, 1.0, sm.horizon);
    NodalField u0(g);
    for (int j = 1; j < nx; ++j) u0.values[static_cast<size_t>(j - 1)] = sm.spec.u0(g.x(j));
    const double m0 = measure(u0, sample_omega(sm.spec, g));
    CHECK(sm.spec.measurement(0.0) == doctest::Approx(m0).epsilon(1e-15));
  }
  ManufacturedCase sm1 = case1_smooth(200);
  CHECK(sm1.name == "case1-smooth");
  SpaceTimeGrid g(200, 1, 1.0, sm1.horizon);
  NodalField u0(g);
  for (int j = 1; j < 200; ++j) u0.values[static_cast<size_t>(j - 1)] = sm1.spec.u0(g.x(j));
  CHECK(sm1.spec.measurement(0.0) ==
        doctest::Approx(measure(u0, sample_omega(sm1.spec, g))).epsilon(1e-15));
}

TEST_CASE("residual queries need a quad twin") {
  ManufacturedCase mc = case1();
  mc.qid = -1;
  CHECK_THROWS_AS(manufactured_residual(mc, 0.5, 0.5), data_error);
  CHECK_NOTHROW(check_manufactured(mc));  // opt-out is silent
}

TEST_CASE("error tables") {
  ManufacturedCase c2 = case2();
  SpaceTimeGrid g(64, 16, 1.0, c2.horizon);

  SUBCASE("an exactly sampled trajectory has zero u error") {
    Trajectory tr{g, {}, {}, {}, {}};
    for (int i = 0; i <= 16; ++i) {
      const double t = g.t(i);
      NodalField st(g);
      for (int j = 1; j < 64; ++j) {
        st.values[static_cast<size_t>(j - 1)] = c2.exact_u(t, g.x(j));
      }
      tr.times.push_back(t);
      tr.states.push_back(std::move(st));
    }
    ErrorTable tab = compute_errors(tr, c2);
    REQUIRE(tab.times.size() == 17);
    for (double e : tab.u_max_err) CHECK(e == 0.0);
    CHECK(tab.final_rel_err_u == 0.0);
    for (double e : tab.h_abs_err) CHECK(std::isnan(e));
    CHECK(std::isnan(tab.final_rel_err_h));

    // a uniform shift registers at its own size
    for (double& v : tr.states.back().values) v += 1e-3;
    tab = compute_errors(tr, c2);
    CHECK(tab.u_max_err.back() == doctest::Approx(1e-3).epsilon(1e-12));
    // final exact profile peaks at 2, so the relative error is half the shift
    CHECK(tab.final_rel_err_u == doctest::Approx(5e-4).epsilon(1e-12));
  }

  SUBCASE("direct runs never report an h error") {
    DirectSchemeConfig cfg{Scheme::CrankNicolson, g, 1};
    Trajectory tr = run_direct(c2.spec, c2.exact_h, cfg);
    ErrorTable tab = compute_errors(tr, c2);
    for (double e : tab.h_abs_err) CHECK(std::isnan(e));
    CHECK(std::isnan(tab.final_rel_err_h));
    CHECK(tab.u_max_err.back() > 0.0);
  }

  SUBCASE("inverse runs report h errors everywhere except t = 0") {
    InverseSchemeConfig cfg{InverseScheme::CnSplitting, g, 1, 1e-12, {}};
    Trajectory tr = run_inverse(c2.spec, cfg);
    ErrorTable tab = compute_errors(tr, c2);
    CHECK(std::isnan(tab.h_abs_err[0]));
    for (size_t i = 1; i < tab.h_abs_err.size(); ++i) {
      CHECK(std::isfinite(tab.h_abs_err[i]));
    }
    CHECK(std::isfinite(tab.final_rel_err_h));
  }
}

TEST_CASE("convergence study: CN spatial order on the manufactured problem") {
  // tau is refined like dx^2 so the O(tau) lagged cubic does not mask the
  // second-order spatial truncation.
  ManufacturedCase c2 = case2();
  auto rows = convergence_study(c2, {{50, 200}, {100, 800}, {200, 3200}},
                                Scheme::CrankNicolson, false);
  REQUIRE(rows.size() == 3);
  CHECK(std::isnan(rows[0].order_u));
  CHECK(rows[0].u_final_max_err == doctest::Approx(2.7316e-4).epsilon(1e-3));
  CHECK(rows[1].order_u == doctest::Approx(1.983287).epsilon(1e-4));
  CHECK(rows[2].order_u == doctest::Approx(1.995648).epsilon(1e-4));
  CHECK(rows[1].order_u > 1.8);
  CHECK(rows[2].order_u < 2.2);
  for (const ConvergenceRow& r : rows) CHECK(std::isnan(r.h_max_err));
}

TEST_CASE("convergence study: Rothe temporal order at fixed spatial resolution") {
  ManufacturedCase c2 = case2();
  auto rows = convergence_study(c2, {{400, 50}, {400, 100}, {400, 200}},
                                Scheme::RotheBackwardEuler, false);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].u_final_max_err == doctest::Approx(4.5952e-3).epsilon(1e-3));
  CHECK(rows[1].order_u == doctest::Approx(0.989934).epsilon(1e-4));
  CHECK(rows[2].order_u == doctest::Approx(0.990174).epsilon(1e-4));
  CHECK(rows[1].order_u > 0.8);
  CHECK(rows[2].order_u < 1.2);
}

TEST_CASE("convergence study: injected runner and inverse columns") {
  ManufacturedCase c2 = case2();

  SUBCASE("a runner reporting exact zeros surfaces NaN orders") {
    auto rows = convergence_study(
        c2, {{10, 10}, {20, 20}}, Scheme::CrankNicolson, false,
        [](int, int) { return std::pair<double, double>(0.0, 0.0); });
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].u_final_max_err == 0.0);
    CHECK(std::isnan(rows[1].order_u));
  }

  SUBCASE("inverse studies populate the h column") {
    auto rows = convergence_study(c2, {{50, 50}, {100, 100}},
                                  Scheme::CrankNicolson, true);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].h_max_err > 0.0);
    CHECK(std::isfinite(rows[1].h_max_err));
    CHECK(std::isfinite(rows[1].order_h));
    CHECK(rows[0].nx == 50);
    CHECK(rows[1].nt == 100);
  }
}
