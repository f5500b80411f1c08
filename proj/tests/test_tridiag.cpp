#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "pp/tridiag.hpp"

using namespace pp;

namespace {
const double kPi = std::acos(-1.0);

std::vector<double> dense_of(const TridiagonalMatrix& a) {
  const size_t n = static_cast<size_t>(a.n());
  std::vector<double> d(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    d[i * n + i] = a.diag()[i];
    if (i > 0) d[i * n + i - 1] = a.sub()[i - 1];
    if (i + 1 < n) d[i * n + i + 1] = a.sup()[i];
  }
  return d;
}

TridiagonalMatrix random_dominant(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  std::uniform_real_distribution<double> bump(0.1, 2.0);
  TridiagonalMatrix a(n);
  for (int i = 0; i + 1 < n; ++i) {
    a.sub()[static_cast<size_t>(i)] = off(rng);
    a.sup()[static_cast<size_t>(i)] = off(rng);
  }
  for (int i = 0; i < n; ++i) {
    double row = bump(rng);
    if (i > 0) row += std::abs(a.sub()[static_cast<size_t>(i - 1)]);
    if (i + 1 < n) row += std::abs(a.sup()[static_cast<size_t>(i)]);
    a.diag()[static_cast<size_t>(i)] = (off(rng) < 0.0 ? -row : row);
  }
  return a;
}
}  // namespace

TEST_CASE("laplacian stencil entries") {
  // two cells: a single interior node, dx = 1/2, -2/dx^2 = -8
  TridiagonalMatrix l2 = assemble_laplacian(SpaceTimeGrid(2, 1));
  REQUIRE(l2.n() == 1);
  CHECK(l2.diag()[0] == doctest::Approx(-8.0).epsilon(1e-15));

  TridiagonalMatrix l4 = assemble_laplacian(SpaceTimeGrid(4, 1));
  REQUIRE(l4.n() == 3);
  for (double v : l4.diag()) CHECK(v == doctest::Approx(-32.0).epsilon(1e-15));
  for (double v : l4.sub()) CHECK(v == doctest::Approx(16.0).epsilon(1e-15));
  for (double v : l4.sup()) CHECK(v == doctest::Approx(16.0).epsilon(1e-15));
}

TEST_CASE("laplacian of a sine is second-order accurate") {
  SpaceTimeGrid g(100, 1);
  TridiagonalMatrix l = assemble_laplacian(g);
  std::vector<double> s(99);
  for (int j = 1; j < 100; ++j) s[static_cast<size_t>(j - 1)] = std::sin(kPi * g.x(j));
  std::vector<double> ls = l.apply(s);
  double worst = 0.0;
  for (size_t k = 0; k < ls.size(); ++k) {
    worst = std::max(worst, std::abs(ls[k] + kPi * kPi * s[k]));
  }
  const double bound = std::pow(kPi, 4) * g.dx() * g.dx() / 12.0;
  CHECK(worst <= bound * 1.1);
  CHECK(worst >= bound * 0.5);  // the bound is tight for the pure mode
}

TEST_CASE("operator M entries and eta limits") {
  // M = I - eta L; dx = 1/4, eta = 1/2: diag 1 + 2*0.5*16 = 17, off -8
  TridiagonalMatrix m = assemble_operator_M(SpaceTimeGrid(4, 1), 0.5);
  REQUIRE(m.n() == 3);
  for (double v : m.diag()) CHECK(v == doctest::Approx(17.0).epsilon(1e-15));
  for (double v : m.sub()) CHECK(v == doctest::Approx(-8.0).epsilon(1e-15));
  for (double v : m.sup()) CHECK(v == doctest::Approx(-8.0).epsilon(1e-15));
  CHECK(m.is_strictly_diagonally_dominant());

  // eta = 0 collapses to the identity (the vanishing-relaxation limit)
  TridiagonalMatrix id = assemble_operator_M(SpaceTimeGrid(4, 1), 0.0);
  for (double v : id.diag()) CHECK(v == 1.0);
  for (double v : id.sub()) CHECK(v == 0.0);

  CHECK_THROWS_AS(assemble_operator_M(SpaceTimeGrid(4, 1), -0.25), assumption_error);
}

TEST_CASE("variable flux reduces to the laplacian for constant coefficients") {
  SpaceTimeGrid g(16, 1);
  TridiagonalMatrix l = assemble_laplacian(g);
  TridiagonalMatrix f1 = assemble_variable_flux(g, std::vector<double>(16, 1.0));
  for (int i = 0; i < f1.n(); ++i) {
    CHECK(f1.diag()[static_cast<size_t>(i)] == l.diag()[static_cast<size_t>(i)]);
    if (i + 1 < f1.n()) {
      CHECK(f1.sub()[static_cast<size_t>(i)] == l.sub()[static_cast<size_t>(i)]);
      CHECK(f1.sup()[static_cast<size_t>(i)] == l.sup()[static_cast<size_t>(i)]);
    }
  }
  TridiagonalMatrix f2 = assemble_variable_flux(g, std::vector<double>(16, 2.0));
  for (int i = 0; i < f2.n(); ++i) {
    CHECK(f2.diag()[static_cast<size_t>(i)] ==
          doctest::Approx(2.0 * l.diag()[static_cast<size_t>(i)]).epsilon(1e-15));
  }
}

TEST_CASE("variable flux approximates d/dx(c du/dx)") {
  // c = 1 + x against u = x(1-x): d/dx((1+x)(1-2x)) = -1 - 4x
  SpaceTimeGrid g(100, 1);
  std::vector<double> c(100);
  for (int k = 0; k < 100; ++k) c[static_cast<size_t>(k)] = 1.0 + (k + 0.5) * g.dx();
  TridiagonalMatrix f = assemble_variable_flux(g, c);
  std::vector<double> u(99);
  for (int j = 1; j < 100; ++j) {
    const double x = g.x(j);
    u[static_cast<size_t>(j - 1)] = x * (1.0 - x);
  }
  std::vector<double> fu = f.apply(u);
  double worst = 0.0;
  for (int j = 1; j < 100; ++j) {
    worst = std::max(worst, std::abs(fu[static_cast<size_t>(j - 1)] - (-1.0 - 4.0 * g.x(j))));
  }
  CHECK(worst <= 5e-3);

  CHECK_THROWS_AS(assemble_variable_flux(g, std::vector<double>(99, 1.0)), data_error);
  std::vector<double> bad(100, 1.0);
  bad[40] = 0.0;
  CHECK_THROWS_AS(assemble_variable_flux(g, bad), assumption_error);
}

TEST_CASE("thomas solve basics") {
  TridiagonalMatrix id(5);
  for (auto& v : id.diag()) v = 1.0;
  std::vector<double> rhs{1, 2, 3, 4, 5};
  CHECK(thomas_solve(id, rhs) == rhs);

  TridiagonalMatrix two(3);
  for (auto& v : two.diag()) v = 2.0;
  std::vector<double> x = thomas_solve(two, {2, 4, 8});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(x[2] == doctest::Approx(4.0).epsilon(1e-15));

  // n = 1
  TridiagonalMatrix one(1);
  one.diag()[0] = 4.0;
  CHECK(thomas_solve(one, {2.0})[0] == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(thomas_solve(id, std::vector<double>(4, 0.0)), data_error);
}

TEST_CASE("thomas requires strict diagonal dominance") {
  TridiagonalMatrix a(3);
  a.diag() = {2.0, 2.0, 2.0};
  a.sub() = {1.0, 1.0};
  a.sup() = {1.0, 1.0};
  // middle row: |2| = |1| + |1|, not strict
  CHECK(!a.is_strictly_diagonally_dominant());
  CHECK_THROWS_AS(thomas_solve(a, std::vector<double>(3, 1.0)), linalg_error);
}

TEST_CASE("thomas against a dense pivoted oracle") {
  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> rv(-2.0, 2.0);
  std::uniform_int_distribution<int> sizes(2, 64);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = sizes(rng);
    TridiagonalMatrix a = random_dominant(rng, n);
    std::vector<double> rhs(static_cast<size_t>(n));
    for (auto& v : rhs) v = rv(rng);

    const std::vector<double> sub_before = a.sub();
    const std::vector<double> diag_before = a.diag();
    const std::vector<double> rhs_before = rhs;

    std::vector<double> x = thomas_solve(a, rhs);
    std::vector<double> y = oracle::dense_solve(dense_of(a), rhs);

    double xmax = 0.0;
    for (int i = 0; i < n; ++i) {
      xmax = std::max(xmax, std::abs(x[static_cast<size_t>(i)]));
      CHECK(std::abs(x[static_cast<size_t>(i)] - y[static_cast<size_t>(i)]) <= 1e-11);
    }

    // residual contract
    std::vector<double> ax = a.apply(x);
    double rmax = 0.0, bmax = 0.0;
    for (int i = 0; i < n; ++i) {
      rmax = std::max(rmax, std::abs(ax[static_cast<size_t>(i)] - rhs[static_cast<size_t>(i)]));
      bmax = std::max(bmax, std::abs(rhs[static_cast<size_t>(i)]));
    }
    CHECK(rmax <= 1e-12 * (a.inf_norm() * xmax + bmax));

    // inputs are left untouched
    CHECK(a.sub() == sub_before);
    CHECK(a.diag() == diag_before);
    CHECK(rhs == rhs_before);
  }
}

TEST_CASE("thomas at scale") {
  const int n = 10000;
  TridiagonalMatrix a(n);
  for (int i = 0; i < n; ++i) a.diag()[static_cast<size_t>(i)] = 4.0;
  for (int i = 0; i + 1 < n; ++i) {
    a.sub()[static_cast<size_t>(i)] = -1.0;
    a.sup()[static_cast<size_t>(i)] = -1.0;
  }
  std::vector<double> want(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) want[static_cast<size_t>(i)] = std::sin(0.01 * i);
  std::vector<double> rhs = a.apply(want);
  std::vector<double> got = thomas_solve(a, rhs);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(got[static_cast<size_t>(i)] - want[static_cast<size_t>(i)]));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("rank-one solve") {
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> rv(-1.0, 1.0);

  SUBCASE("zero column reduces to a plain solve, bitwise") {
    TridiagonalMatrix a = random_dominant(rng, 12);
    std::vector<double> rhs(12);
    for (auto& v : rhs) v = rv(rng);
    std::vector<double> zero(12, 0.0);
    std::vector<double> v(12, 0.3);
    CHECK(rank_one_solve(a, zero, v, rhs) == thomas_solve(a, rhs));
  }

  SUBCASE("1x1 update by hand") {
    TridiagonalMatrix a(1);
    a.diag()[0] = 2.0;
    // (2 + 1*1) x = 6
    std::vector<double> x = rank_one_solve(a, {1.0}, {1.0}, {6.0});
    CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-15));
  }

  SUBCASE("random updates against the dense oracle") {
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 8;
      TridiagonalMatrix a = random_dominant(rng, n);
      std::vector<double> u(static_cast<size_t>(n)), v(static_cast<size_t>(n)),
          rhs(static_cast<size_t>(n));
      for (auto& w : u) w = 0.5 * rv(rng);
      for (auto& w : v) w = 0.5 * rv(rng);
      for (auto& w : rhs) w = rv(rng);
      std::vector<double> d = dense_of(a);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          d[static_cast<size_t>(i * n + j)] +=
              u[static_cast<size_t>(i)] * v[static_cast<size_t>(j)];
        }
      }
      std::vector<double> got = rank_one_solve(a, u, v, rhs);
      std::vector<double> want = oracle::dense_solve(d, rhs);
      for (int i = 0; i < n; ++i) {
        CHECK(std::abs(got[static_cast<size_t>(i)] - want[static_cast<size_t>(i)]) <= 1e-11);
      }
    }
  }

  SUBCASE("vanishing correction denominator is an identifiability failure") {
    TridiagonalMatrix a(2);
    a.diag() = {1.0, 1.0};
    // z = a^{-1} u = u, 1 + v.z = 1 - 1 = 0
    std::vector<double> u{1.0, 0.0};
    std::vector<double> v{-1.0, 0.0};
    CHECK_THROWS_AS(rank_one_solve(a, u, v, {1.0, 1.0}), identifiability_error);
  }
}
