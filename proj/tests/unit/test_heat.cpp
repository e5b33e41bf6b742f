#include <gtest/gtest.h>

#include <cmath>

#include "logflow/flow.hpp"
#include "logflow/heat.hpp"
#include "logflow/initial_data.hpp"
#include "oracles.hpp"

using namespace logflow;

TEST(Heat, QuadraticIsAnalytic) {
  const BoxDomain d{2, 6.0, 25, 0};
  const GridFunction u = GridFunction::sample(d, [](const Point& x) { return 0.5 * dot(x, x, 2); });
  const GridFunction h = heat_solve(u, 0.3, QuadraticFarField{SymMat::identity(2)});
  for (std::size_t f = 0; f < d.node_count(); ++f) {
    const Point x = d.coordinate(f);
    EXPECT_NEAR(h[f], 0.5 * dot(x, x, 2) + 0.6, 1e-12);
  }
}

TEST(Heat, ConstantStaysConstant) {
  const BoxDomain d{1, 3.0, 31, 0};
  QuadraticFarField c{SymMat(1)};
  c.c = 2.5;
  const GridFunction u = GridFunction::sample(d, [](const Point&) { return 2.5; });
  const GridFunction h = heat_solve(u, 0.05, c);
  for (std::size_t f = 0; f < d.node_count(); ++f) EXPECT_NEAR(h[f], 2.5, 1e-13);
}

TEST(Heat, OneDimensionalBumpAgainstClosedForm) {
  // exp(-x^2) under the heat semigroup is exp(-x^2/(1+4t)) / sqrt(1+4t).
  const BoxDomain d{1, 6.0, 241, 0};
  InitialDataSpec s;
  s.kind = InitialKind::QuadraticPlusBump;
  s.n = 1;
  s.amplitude = 1.0;
  const double t = 0.1;
  const GridFunction h = heat_solve(sample_initial(s, d), t, *far_field(s));
  const double k = 1 + 4 * t;
  EXPECT_LT(oracle::interior_error(
                h, [&](const Point& x) { return 0.5 * x[0] * x[0] + t + std::exp(-x[0] * x[0] / k) / std::sqrt(k); }),
            1e-9);
}

TEST(Heat, TailErrorForLargeTimes) {
  const BoxDomain d{1, 1.0, 21, 0};
  const GridFunction u = GridFunction::sample(d, [](const Point& x) { return 0.5 * x[0] * x[0]; });
  EXPECT_THROW(heat_solve(u, 5.0, QuadraticFarField{SymMat::identity(1)}), TailError);
  EXPECT_THROW(heat_solve(u, 0.0, QuadraticFarField{SymMat::identity(1)}), DomainError);
  EXPECT_GT(heat_tail_mass(1, 1.0, 5.0), 0.1);
  EXPECT_LT(heat_tail_mass(2, 6.0, 0.1), 1e-30);
}

TEST(HeatProperty, Semigroup) {
  const BoxDomain d{2, 5.0, 81, 0};
  InitialDataSpec s;
  s.kind = InitialKind::QuadraticPlusBump;
  s.n = 2;
  s.A = SymMat::diagonal(2, {1.0, 2.0, 0.0});
  s.amplitude = 0.3;
  const auto ff = *far_field(s);
  const GridFunction u0 = sample_initial(s, d);
  // The intermediate state has far field q + 0.05 tr A; the remainder
  // handed to the second convolution must still decay.
  auto shifted = ff;
  shifted.c += 0.05 * ff.A.trace();
  const GridFunction two = heat_solve(heat_solve(u0, 0.05, ff), 0.1, shifted);
  const GridFunction one = heat_solve(u0, 0.15, ff);
  EXPECT_LT(two.interior_sup_distance(one), 2e-10);
}

TEST(HeatProperty, MaximumPrincipleOnDecayingPart) {
  oracle::Generator gen(77);
  for (int trial = 0; trial < 5; ++trial) {
    const BoxDomain d{1, 6.0, 121, 0};
    const double amp = gen.uniform(-1, 1), w = gen.uniform(0.5, 1.5);
    auto v = [&](const Point& x) { return amp * std::exp(-x[0] * x[0] / (w * w)); };
    const GridFunction h = heat_solve(GridFunction::sample(d, v), gen.uniform(0.05, 0.5), QuadraticFarField{SymMat(1)});
    double sup0 = 0.0, sup1 = 0.0;
    for (std::size_t f = 0; f < d.node_count(); ++f) {
      sup0 = std::max(sup0, std::abs(v(d.coordinate(f))));
      sup1 = std::max(sup1, std::abs(h[f]));
    }
    EXPECT_LE(sup1, sup0 + 1e-12);
  }
}

TEST(HeatProperty, FlowAtTauZeroConvergesToKernel) {
  InitialDataSpec s;
  s.kind = InitialKind::QuadraticPlusBump;
  s.n = 1;
  s.amplitude = 1.0;
  std::vector<double> err;
  for (int m : {41, 81, 161}) {
    const BoxDomain d{1, 4.0, m, 0};
    const GridFunction u0 = sample_initial(s, d);
    const auto ff = *far_field(s);
    RunConfig rc;
    rc.record_monitors = false;
    const GridFunction f = run(u0, 0.0, 0.1, ff, rc).final_state.u;
    err.push_back(f.interior_sup_distance(heat_solve(u0, 0.1, ff)));
  }
  EXPECT_LT(err[0], 5e-3);
  EXPECT_GT(err[0] / err[1], 3.4);
  EXPECT_GT(err[1] / err[2], 3.4);
}
