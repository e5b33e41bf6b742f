#include <benchmark/benchmark.h>

#include <cmath>

#include "logflow/expander.hpp"
#include "logflow/flow.hpp"
#include "logflow/grid.hpp"
#include "logflow/legendre.hpp"

using namespace logflow;

namespace {

GridFunction bump(int n, int m) {
  const BoxDomain d{n, 2.0, m, 0};
  return GridFunction::sample(d, [n](const Point& x) {
    const double r2 = dot(x, x, n);
    return 0.5 * r2 + 0.1 * std::exp(-r2);
  });
}

void BM_Hessian(benchmark::State& state) {
  const GridFunction u = bump(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hessian(u));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(u.size()));
}
BENCHMARK(BM_Hessian)->Arg(65)->Arg(129)->Arg(257);

void BM_Rhs(benchmark::State& state) {
  const GridFunction u = bump(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rhs(u, 1.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(u.size()));
}
BENCHMARK(BM_Rhs)->Arg(65)->Arg(129)->Arg(257);

void BM_MidpointStep(benchmark::State& state) {
  const GridFunction u = bump(2, static_cast<int>(state.range(0)));
  const FlowState s = make_state(u, 1.0, Frozen{});
  const double dt = dt_stable(s);
  for (auto _ : state) benchmark::DoNotOptimize(step_explicit(s, dt));
}
BENCHMARK(BM_MidpointStep)->Arg(65)->Arg(129);

void BM_Legendre(benchmark::State& state) {
  const GridFunction u = bump(2, static_cast<int>(state.range(0)));
  const BoxDomain y = auto_dual_domain(u);
  for (auto _ : state) benchmark::DoNotOptimize(legendre_transform(u, y));
}
BENCHMARK(BM_Legendre)->Arg(33)->Arg(65);

void BM_ExpanderNewton(benchmark::State& state) {
  RadialExpanderProblem p;
  p.n = 1;
  p.a = -0.1;
  p.slope = 0.2;
  const ExpanderProfile profile = radial_shoot(p);
  const BoxDomain d{1, 2.0, static_cast<int>(state.range(0)), 0};
  // x^2/2 plus the affine function matching the profile at both ends.
  const double L = d.half_width;
  const double lo = profile.value(-L) - 0.5 * L * L, hi = profile.value(L) - 0.5 * L * L;
  const GridFunction start = GridFunction::sample(
      d, [&](const Point& x) { return 0.5 * x[0] * x[0] + 0.5 * (hi + lo) + 0.5 * (hi - lo) * x[0] / L; });
  for (auto _ : state) benchmark::DoNotOptimize(newton_solve(start, expander_flow(profile)));
}
BENCHMARK(BM_ExpanderNewton)->Arg(129)->Arg(513);

void BM_RadialShoot(benchmark::State& state) {
  RadialExpanderProblem p;
  p.n = static_cast<int>(state.range(0));
  p.a = -0.1;
  for (auto _ : state) benchmark::DoNotOptimize(radial_shoot(p));
}
BENCHMARK(BM_RadialShoot)->Arg(1)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
