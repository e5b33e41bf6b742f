#include <gtest/gtest.h>

#include <cmath>

#include "logflow/analysis.hpp"
#include "logflow/flow.hpp"
#include "logflow/heat.hpp"
#include "logflow/initial_data.hpp"
#include "oracles.hpp"

using namespace logflow;

namespace {

GridFunction quadratic(const BoxDomain& d, const SymMat& A) {
  return GridFunction::sample(d, [&](const Point& x) { return 0.5 * A.quadratic_form(x); });
}

InitialDataSpec bump_spec(int n, double amplitude = 0.1) {
  InitialDataSpec s;
  s.kind = InitialKind::QuadraticPlusBump;
  s.n = n;
  s.A = SymMat::identity(n);
  s.amplitude = amplitude;
  return s;
}

double interior_sup_diff(const GridFunction& a, const GridFunction& b) { return a.interior_sup_distance(b); }

}  // namespace

TEST(OperatorValue, MatchesFormula) {
  EXPECT_NEAR(operator_value(SymMat::scaled_identity(2, 2.0), 0.5), 0.5 * std::log(2.0) + 2.0, 1e-15);
  EXPECT_NEAR(operator_value(SymMat::identity(3), 1.0), 0.0, 1e-15);
  EXPECT_NEAR(operator_value(SymMat::identity(3), 0.0), 3.0, 1e-15);
}

TEST(Rhs, Examples) {
  const BoxDomain d{2, 1.0, 9, 0};
  const GridFunction half = quadratic(d, SymMat::identity(2));
  const GridFunction a = rhs(half, 1.0), b = rhs(half, 0.0);
  const GridFunction c = rhs(quadratic(d, SymMat::scaled_identity(2, 2.0)), 0.5);
  for_each_node(d, 1, [&](std::size_t f, const Index&) {
    EXPECT_NEAR(a[f], 0.0, 1e-12);
    EXPECT_NEAR(b[f], 2.0, 1e-12);
    EXPECT_NEAR(c[f], 2.346574, 1e-6);
  });
}

TEST(Rhs, NonConvexRaises) {
  const BoxDomain d{2, 1.0, 9, 0};
  EXPECT_THROW(rhs(quadratic(d, SymMat::diagonal(2, {1.0, -0.5, 0.0})), 1.0), NonConvexityError);
  // The heat endpoint has no convexity requirement.
  EXPECT_NO_THROW(rhs(quadratic(d, SymMat::diagonal(2, {1.0, -0.5, 0.0})), 0.0));
}

TEST(DtStable, Examples) {
  // h = 0.1 on both grids.
  const GridFunction u2 = quadratic({2, 1.0, 21, 0}, SymMat::identity(2));
  EXPECT_NEAR(dt_stable(u2, 1.0), 0.0025, 1e-15);
  const GridFunction u1 = quadratic({1, 1.0, 21, 0}, SymMat::identity(1));
  EXPECT_NEAR(dt_stable(u1, 0.0), 0.0025, 1e-15);
}

TEST(DtStable, ShrinksAsConvexityDegenerates) {
  const BoxDomain d{1, 1.0, 21, 0};
  double prev = 1e300;
  for (double lam : {1.0, 1e-2, 1e-4, 1e-6}) {
    const double dt = dt_stable(quadratic(d, SymMat::scaled_identity(1, lam)), 1.0);
    EXPECT_LT(dt, prev);
    prev = dt;
  }
  EXPECT_LT(prev, 1e-7);
}

TEST(Step, QuadraticIsExactForAnyDt) {
  const BoxDomain d{2, 2.0, 17, 0};
  const SymMat A = SymMat::diagonal(2, {2.0, 0.7, 0.0});
  const QuadraticFarField ff{A};
  for (Stepper st : {Stepper::ForwardEuler, Stepper::Midpoint}) {
    FlowState s = make_state(quadratic(d, A), 1.0, ff);
    StepOptions opts;
    opts.stepper = st;
    for (double dt : {0.3, 0.01, 1.7}) s = step_explicit(s, dt, opts);
    const double shift = s.t * std::log(A.determinant()) / 2.0;
    // Steps far beyond dt_stable amplify rounding noise, hence the loose bound.
    EXPECT_LT(oracle::interior_error(s.u, [&](const Point& x) { return 0.5 * A.quadratic_form(x) + shift; }, 0),
              1e-9);
    EXPECT_EQ(s.step_count, 3);
  }
}

TEST(Step, IdentityIsStationary) {
  const BoxDomain d{3, 1.0, 7, 0};
  const GridFunction u = quadratic(d, SymMat::identity(3));
  FlowState s = make_state(u, 1.0, QuadraticFarField{SymMat::identity(3)});
  for (int k = 0; k < 4; ++k) s = step_explicit(s, 0.01);
  EXPECT_LT(s.u.interior_sup_distance(u), 1e-13);
}

TEST(Step, HeatEndpointOnQuadraticMatchesHeatSolver) {
  const BoxDomain d{2, 3.0, 25, 0};
  const GridFunction u = quadratic(d, SymMat::identity(2));
  const RunResult r = run(u, 0.0, 0.1, QuadraticFarField{SymMat::identity(2)});
  const GridFunction h = heat_solve(u, 0.1, QuadraticFarField{SymMat::identity(2)});
  EXPECT_LT(oracle::interior_error(r.final_state.u, [](const Point& x) { return 0.5 * dot(x, x, 2) + 0.2; }),
            1e-12);
  EXPECT_LT(r.final_state.u.interior_sup_distance(h), 1e-12);
}

TEST(Step, RejectionHalvesThenAborts) {
  const BoxDomain d{1, 3.0, 61, 0};
  const GridFunction u0 = sample_initial(bump_spec(1, 0.3), d);
  const FlowState s = make_state(u0, 1.0, *far_field(bump_spec(1, 0.3)));
  StepOptions none;
  none.max_halvings = 0;
  try {
    step_explicit(s, 50.0, none);
    FAIL() << "expected an abort";
  } catch (const AbortedNonConvex& e) {
    EXPECT_EQ(e.last_good().t, 0.0);
    EXPECT_EQ(e.last_good().u.interior_sup_distance(u0), 0.0);
  }
  // With halving allowed the same request is accepted at a shorter step.
  const FlowState next = step_explicit(s, 50.0);
  EXPECT_GT(next.t, 0.0);
  EXPECT_LT(next.t, 50.0);
}

TEST(Run, QuadraticTwoIdentityToTimeOne) {
  const BoxDomain d{2, 2.0, 33, 0};
  const SymMat A = SymMat::scaled_identity(2, 2.0);
  const RunResult r = run(quadratic(d, A), 1.0, 1.0, QuadraticFarField{A});
  EXPECT_DOUBLE_EQ(r.final_state.t, 1.0);
  EXPECT_LT(oracle::interior_error(r.final_state.u,
                                   [&](const Point& x) { return 0.5 * A.quadratic_form(x) + std::log(2.0); }),
            1e-10);
}

TEST(Run, IdentityEigenvaluesStayOne) {
  const BoxDomain d{2, 1.0, 17, 0};
  for (double tau : {0.0, 0.4, 1.0}) {
    const RunResult r = run(quadratic(d, SymMat::identity(2)), tau, 1.0, QuadraticFarField{SymMat::identity(2)});
    ASSERT_FALSE(r.final_state.monitor_log.empty());
    for (const MonitorRecord& m : r.final_state.monitor_log) {
      EXPECT_NEAR(m.lambda_min, 1.0, 1e-10);
      EXPECT_NEAR(m.lambda_max, 1.0, 1e-10);
    }
  }
}

TEST(Run, BumpPreservesInitialBounds) {
  const BoxDomain d{2, 3.0, 33, 0};
  const auto spec = bump_spec(2);
  const RunResult r = run(sample_initial(spec, d), 1.0, 1.0, *far_field(spec));
  const auto& log = r.final_state.monitor_log;
  ASSERT_GT(log.size(), 2u);
  const double lam = log.front().lambda_min, Lam = log.front().lambda_max;
  EXPECT_LT(lam, 1.0);
  EXPECT_GT(Lam, 1.0);
  for (const MonitorRecord& m : log) {
    EXPECT_GE(m.lambda_min, lam - 1e-3);
    EXPECT_LE(m.lambda_max, Lam + 1e-3);
    EXPECT_TRUE(std::isfinite(m.d3_norm) && std::isfinite(m.residual) && std::isfinite(m.grad_sq_window));
    EXPECT_GE(m.dt, 0.0);
  }
}

TEST(Run, MonitorTimesAreNondecreasingAndSnapshotsLand) {
  const BoxDomain d{1, 2.0, 33, 0};
  const auto spec = bump_spec(1);
  RunConfig rc;
  rc.snapshot_times = {0.1, 0.3, 0.05};
  const RunResult r = run(sample_initial(spec, d), 1.0, 0.4, *far_field(spec), rc);
  ASSERT_EQ(r.snapshots.size(), 5u);
  const double want[] = {0.0, 0.05, 0.1, 0.3, 0.4};
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(r.snapshots[k].t, want[k]);
  for (std::size_t k = 1; k < r.final_state.monitor_log.size(); ++k)
    EXPECT_GE(r.final_state.monitor_log[k].t, r.final_state.monitor_log[k - 1].t);
}

TEST(Run, ReferenceBoundaryMustMatchInitialData) {
  const BoxDomain d{1, 2.0, 17, 0};
  const ReferenceSolution far{"shifted", [](const Point& x, double) { return 0.5 * x[0] * x[0] + 10.0; }};
  EXPECT_THROW(run(quadratic(d, SymMat::identity(1)), 1.0, 0.1, far), BoundaryInconsistency);
}

TEST(Run, ConditionBViolationWarns) {
  const BoxDomain d{1, 2.0, 17, 0};
  RunConfig rc;
  rc.condition_b = std::make_pair(2.0, 3.0);
  const RunResult r = run(quadratic(d, SymMat::identity(1)), 1.0, 0.01, QuadraticFarField{SymMat::identity(1)}, rc);
  ASSERT_EQ(r.warnings.size(), 1u);
  rc.condition_b = std::make_pair(1.0, 1.0);
  EXPECT_TRUE(run(quadratic(d, SymMat::identity(1)), 1.0, 0.01, QuadraticFarField{SymMat::identity(1)}, rc)
                  .warnings.empty());
}

TEST(Run, NonConvexInitialDataRaises) {
  const BoxDomain d{1, 4.0, 65, 0};
  InitialDataSpec s;
  s.kind = InitialKind::LinearPlusBump;
  s.n = 1;
  s.amplitude = 0.1;
  EXPECT_THROW(run(sample_initial(s, d), 1.0, 1.0, Frozen{}), NonConvexityError);
}

TEST(Schedules, GeometricAndUniform) {
  const auto g = geometric_times(0.25, 6);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_EQ(g.back(), 8.0);
  const auto u = uniform_times(0.1, 1.0, 0.1);
  ASSERT_EQ(u.size(), 10u);
  EXPECT_NEAR(u.front(), 0.1, 1e-15);
  EXPECT_NEAR(u.back(), 1.0, 1e-12);
  EXPECT_EQ(uniform_times(0.0, 1.0, 0.5).size(), 2u);
}

TEST(PdeResidual, ExactQuadraticTrajectory) {
  const BoxDomain d{2, 1.0, 9, 0};
  const SymMat A = SymMat::diagonal(2, {1.5, 0.5, 0.0});
  auto traj = [&](double t) {
    return GridFunction::sample(d, [&](const Point& x) { return 0.5 * A.quadratic_form(x) + t * std::log(0.75) / 2; });
  };
  EXPECT_LE(pde_residual(traj, 1.0, 1e-3, 1.0), 1e-12);
  const Snapshot a{traj(0.0), 0.0, 1.0}, b{traj(0.05), 0.05, 1.0}, c{traj(0.1), 0.1, 1.0};
  EXPECT_LE(pde_residual(a, b, c), 1e-12);
}

TEST(PdeResidual, StationaryIsZero) {
  const GridFunction u = quadratic({2, 1.0, 9, 0}, SymMat::identity(2));
  EXPECT_EQ(pde_residual([&](double) { return u; }, 1.0, 0.1, 1.0), 0.0);
}

TEST(PdeResidual, HeatTrajectoryAgainstKernelSolution) {
  // Residual of the heat-kernel solution under the tau = 0 operator: O(dt + h^2).
  const auto spec = bump_spec(1, 0.5);
  double prev = 0.0;
  for (int m : {51, 101}) {
    const BoxDomain d{1, 5.0, m, 0};
    const GridFunction u0 = sample_initial(spec, d);
    auto traj = [&](double t) { return heat_solve(u0, t, *far_field(spec)); };
    const double r = pde_residual(traj, 0.2, 1e-4, 0.0);
    EXPECT_LT(r, 0.05);
    if (prev > 0.0) {
      EXPECT_GT(prev / r, 3.0);
    }
    prev = r;
  }
}

// Property: halving a fixed time step shrinks the difference at the order of
// the stepper.
TEST(FlowProperty, StepperOrder) {
  const BoxDomain d{1, 3.0, 31, 0};
  const auto spec = bump_spec(1, 0.2);
  const GridFunction u0 = sample_initial(spec, d);
  auto solve = [&](Stepper st, double dt) {
    RunConfig rc;
    rc.dt_fixed = dt;
    rc.step.stepper = st;
    rc.record_monitors = false;
    return run(u0, 1.0, 0.2, *far_field(spec), rc).final_state.u;
  };
  const double base = 0.4 * dt_stable(u0, 1.0);
  const double dt = 0.2 / std::ceil(0.2 / base);
  for (auto [st, expect] : {std::pair{Stepper::ForwardEuler, 2.0}, std::pair{Stepper::Midpoint, 4.0}}) {
    const GridFunction a = solve(st, dt), b = solve(st, dt / 2), c = solve(st, dt / 4);
    const double ratio = interior_sup_diff(a, b) / interior_sup_diff(b, c);
    EXPECT_NEAR(ratio, expect, 0.3 * expect) << (st == Stepper::Midpoint ? "midpoint" : "euler");
  }
}

TEST(FlowProperty, TauLipschitz) {
  const BoxDomain d{1, 3.0, 31, 0};
  const auto spec = bump_spec(1, 0.2);
  const GridFunction u0 = sample_initial(spec, d);
  auto solve = [&](double tau) {
    RunConfig rc;
    rc.record_monitors = false;
    return run(u0, tau, 0.3, default_boundary(spec, tau), rc).final_state.u;
  };
  std::vector<GridFunction> sols;
  const std::vector<double> taus{0.0, 0.25, 0.5, 0.75, 1.0};
  for (double t : taus) sols.push_back(solve(t));
  double L = 0.0;
  for (std::size_t i = 0; i + 1 < taus.size(); ++i)
    L = std::max(L, interior_sup_diff(sols[i], sols[i + 1]) / (taus[i + 1] - taus[i]));
  // Bounded slope over every sub-interval, and the full span is consistent with it.
  EXPECT_LT(L, 5.0);
  EXPECT_LE(interior_sup_diff(sols.front(), sols.back()), L * 1.0 + 1e-12);
}

TEST(FlowProperty, GradientMonitorNonIncreasing) {
  const BoxDomain d{2, 2.0, 25, 0};
  const auto spec = bump_spec(2, 0.1);
  RunConfig rc;
  rc.step.monitors.window_half_width = d.half_width;
  const RunResult r = run(sample_initial(spec, d), 1.0, 0.5, *far_field(spec), rc);
  const auto& log = r.final_state.monitor_log;
  for (std::size_t k = 1; k < log.size(); ++k) EXPECT_LE(log[k].grad_sq_window, log[k - 1].grad_sq_window + 1e-8);
}

TEST(FlowProperty, ConditionAScalingInvariance) {
  const BoxDomain d{2, 2.0, 17, 0};
  const SymMat A = SymMat::diagonal(2, {1.5, 0.8, 0.0});
  const GridFunction u0 = quadratic(d, A);
  RunConfig rc;
  rc.snapshot_times = {0.25};
  const RunResult r = run(u0, 1.0, 1.0, QuadraticFarField{A}, rc);
  const GridFunction& quarter = r.snapshots[1].u;  // t = 1/4
  const GridFunction& one = r.snapshots[2].u;      // t = 1
  // R = 2: u(x, 1/4) = u(2x, 1) / 4; R = 1/2 is the same relation read backwards.
  const auto pairs = coincident_nodes(d, 2.0);
  ASSERT_FALSE(pairs.empty());
  for (const CoincidentPair& p : pairs) {
    EXPECT_NEAR(quarter[p.node], one[p.scaled] / 4.0, 1e-10);
    EXPECT_NEAR(4.0 * quarter[p.node], one[p.scaled], 4e-10);
  }
}
