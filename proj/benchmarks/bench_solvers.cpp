#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "pp/cases.hpp"
#include "pp/direct.hpp"
#include "pp/inverse.hpp"
#include "pp/tridiag.hpp"

using namespace pp;

namespace {

TridiagonalMatrix dominant_system(int n, std::vector<double>& rhs) {
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  TridiagonalMatrix a(n);
  rhs.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double lo = i > 0 ? unit(rng) : 0.0;
    const double hi = i + 1 < n ? unit(rng) : 0.0;
    if (i > 0) a.sub()[static_cast<size_t>(i - 1)] = lo;
    if (i + 1 < n) a.sup()[static_cast<size_t>(i)] = hi;
    a.diag()[static_cast<size_t>(i)] = std::abs(lo) + std::abs(hi) + 1.0;
    rhs[static_cast<size_t>(i)] = unit(rng);
  }
  return a;
}

NodalField initial_state(const ManufacturedCase& mc, const SpaceTimeGrid& g) {
  NodalField u(g);
  for (int j = 1; j < g.x_count(); ++j) {
    u.values[static_cast<size_t>(j - 1)] = mc.spec.u0(g.x(j));
  }
  return u;
}

void BM_ThomasSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> rhs;
  TridiagonalMatrix a = dominant_system(n, rhs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(thomas_solve(a, rhs));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ThomasSolve)->Arg(1000)->Arg(10000);

void BM_RankOneSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> rhs;
  TridiagonalMatrix a = dominant_system(n, rhs);
  std::vector<double> ucol(static_cast<size_t>(n), 0.01);
  std::vector<double> vrow(static_cast<size_t>(n), 0.02);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank_one_solve(a, ucol, vrow, rhs));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RankOneSolve)->Arg(1000)->Arg(10000);

void BM_CnDirectStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ManufacturedCase c1 = case1();
  SpaceTimeGrid g(n, n, 1.0, c1.horizon);
  DirectSchemeConfig cfg{Scheme::CrankNicolson, g, 1};
  NodalField u = initial_state(c1, g);
  const double h = c1.exact_h(g.tau());
  for (auto _ : state) {
    benchmark::DoNotOptimize(cn_direct_step(u, 0, c1.spec, h, cfg));
  }
}
BENCHMARK(BM_CnDirectStep)->Arg(200)->Arg(1000);

void BM_CnInverseStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ManufacturedCase c1 = case1();
  SpaceTimeGrid g(n, n, 1.0, c1.horizon);
  InverseSchemeConfig cfg{InverseScheme::CnSplitting, g, 1, 1e-12, {}};
  NodalField u = initial_state(c1, g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cn_inverse_step(u, 0, c1.spec, cfg));
  }
}
BENCHMARK(BM_CnInverseStep)->Arg(200)->Arg(1000);

void BM_RotheInverseStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ManufacturedCase c1 = case1();
  SpaceTimeGrid g(n, n, 1.0, c1.horizon);
  InverseSchemeConfig cfg{InverseScheme::RotheCoupled, g, 1, 1e-12, {}};
  NodalField u = initial_state(c1, g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rothe_inverse_step(u, 1, c1.spec, cfg));
  }
}
BENCHMARK(BM_RotheInverseStep)->Arg(200)->Arg(1000);

void BM_DirectRun(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ManufacturedCase c2 = case2();
  SpaceTimeGrid g(n, n, 1.0, c2.horizon);
  DirectSchemeConfig cfg{Scheme::CrankNicolson, g, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_direct(c2.spec, c2.exact_h, cfg));
  }
}
BENCHMARK(BM_DirectRun)->Arg(100)->Arg(200);

void BM_InverseRun(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ManufacturedCase c2 = case2();
  SpaceTimeGrid g(n, n, 1.0, c2.horizon);
  InverseSchemeConfig cfg{InverseScheme::RotheCoupled, g, 1, 1e-12, {}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_inverse(c2.spec, cfg));
  }
}
BENCHMARK(BM_InverseRun)->Arg(100)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
