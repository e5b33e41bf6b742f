#include <gtest/gtest.h>

#include <cmath>

#include "logflow/flow.hpp"
#include "logflow/initial_data.hpp"
#include "logflow/mcf.hpp"
#include "oracles.hpp"

using namespace logflow;

namespace {

InitialDataSpec bump_spec(int n) {
  InitialDataSpec s;
  s.kind = InitialKind::QuadraticPlusBump;
  s.n = n;
  s.A = SymMat::identity(n);
  s.amplitude = 0.1;
  return s;
}

std::vector<Snapshot> bump_run(const BoxDomain& d, double t0, double t1, double every) {
  const auto spec = bump_spec(d.n);
  RunConfig rc;
  rc.snapshot_times = uniform_times(t0, t1, every);
  rc.record_monitors = false;
  auto snaps = run(sample_initial(spec, d), 1.0, t1, *far_field(spec), rc).snapshots;
  std::vector<Snapshot> out;
  for (auto& s : snaps)
    if (s.t >= t0 - 1e-12) out.push_back(std::move(s));
  return out;
}

}  // namespace

TEST(Pairing, NullAndSignatureAgree) {
  oracle::Generator gen(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = gen.integer(1, 3);
    const NullVector v{gen.point(n, 2), gen.point(n, 2)}, w{gen.point(n, 2), gen.point(n, 2)};
    double expect = 0.0;
    for (int i = 0; i < n; ++i) expect += 0.5 * (v.x[i] * w.y[i] + v.y[i] * w.x[i]);
    EXPECT_NEAR(null_pairing(v, w, n), expect, 1e-14);
    EXPECT_NEAR(signature_pairing(to_signature_coordinates(v, n), to_signature_coordinates(w, n), n), expect, 1e-14);
  }
}

TEST(Frame, PairingIdentitiesHoldExactly) {
  oracle::Generator gen(12);
  const BoxDomain d{2, 1.0, 9, 0};
  std::vector<double> v(d.node_count());
  for (std::size_t f = 0; f < v.size(); ++f) {
    const Point x = d.coordinate(f);
    v[f] = 0.5 * dot(x, x, 2) + 0.01 * gen.uniform(-1, 1);
  }
  const GridFunction u(d, v);
  for_each_node(d, 2, [&](std::size_t, const Index& idx) {
    const ImmersionFrame fr = immersion_frame(u, idx);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        EXPECT_NEAR(null_pairing(fr.e[i], fr.e[j], 2), fr.metric(i, j), 1e-14);
        EXPECT_NEAR(null_pairing(fr.eta[i], fr.eta[j], 2), -fr.metric(i, j), 1e-14);
        EXPECT_NEAR(null_pairing(fr.e[i], fr.eta[j], 2), 0.0, 1e-14);
      }
    // Spacelike wherever the Hessian is positive definite.
    if (fr.metric.positive_definite()) {
      EXPECT_GT(fr.g, 0.0);
    }
  });
}

TEST(Frame, NeedsTwoLayerMargin) {
  const BoxDomain d{1, 1.0, 9, 0};
  const GridFunction u = GridFunction::sample(d, [](const Point& x) { return x[0] * x[0]; });
  EXPECT_THROW(immersion_frame(u, Index{1, 0, 0}), DomainError);
  EXPECT_NO_THROW(immersion_frame(u, Index{2, 0, 0}));
}

TEST(MeanCurvature, QuadraticIsMinimal) {
  const BoxDomain d{2, 1.0, 9, 0};
  SymMat A(2);
  A.set(0, 0, 2.0);
  A.set(1, 1, 1.0);
  A.set(0, 1, 0.4);
  const GridFunction u = GridFunction::sample(d, [&](const Point& x) { return 0.5 * A.quadratic_form(x); });
  for_each_node(d, 2, [&](std::size_t, const Index& idx) {
    EXPECT_LT(max_component(mean_curvature(u, idx), 2), 1e-10);
  });
}

TEST(MeanCurvature, QuarticHandValue) {
  // g = 3x^2 + 1 = 1.75 and g' = 6x = 3 at x = 0.5.
  const BoxDomain d{1, 1.0, 201, 0};
  const GridFunction u =
      GridFunction::sample(d, [](const Point& x) { return std::pow(x[0], 4) / 4 + x[0] * x[0] / 2; });
  const Index at{150, 0, 0};
  ASSERT_NEAR(d.coordinate(at)[0], 0.5, 1e-14);
  const NullVector H = mean_curvature(u, at);
  const double c = -3.0 / (2.0 * 1.75 * 1.75);
  EXPECT_NEAR(c, -0.489796, 1e-6);
  EXPECT_NEAR(H.x[0], c, 1e-4);
  EXPECT_NEAR(H.y[0], -1.75 * c, 2e-4);
}

TEST(MeanCurvature, SecondOrderAgainstSymbolicOracle) {
  const oracle::QuadraticPlusGaussian f{SymMat::identity(2), {2, 0.1, 1.0}};
  std::vector<double> err;
  for (int m : {33, 65}) {
    const BoxDomain d{2, 2.0, m, 0};
    const GridFunction u = GridFunction::sample(d, [&](const Point& x) { return f.value(x); });
    double worst = 0.0;
    for_each_node(d, 2, [&](std::size_t, const Index& idx) {
      const NullVector H = mean_curvature(u, idx);
      const auto ref = oracle::mean_curvature(f, d.coordinate(idx), 2);
      for (int i = 0; i < 2; ++i)
        worst = std::max({worst, std::abs(H.x[i] - ref.x[i]), std::abs(H.y[i] - ref.y[i])});
    });
    err.push_back(worst);
  }
  EXPECT_LT(err[0], 5e-3);
  EXPECT_NEAR(err[0] / err[1], 4.0, 0.8);
}

TEST(Particles, QuadraticTrajectoryIsStationary) {
  const BoxDomain d{2, 2.0, 17, 0};
  const SymMat A = SymMat::diagonal(2, {2.0, 0.5, 0.0});
  const Point b{0.3, -0.2, 0};
  std::vector<Snapshot> traj;
  for (double t : {0.0, 0.1, 0.2, 0.3}) {
    traj.push_back({GridFunction::sample(d, [&](const Point& x) {
                      return 0.5 * A.quadratic_form(x) + dot(b, x, 2) + t * operator_value(A, 1.0);
                    }),
                    t, 1.0});
  }
  const std::vector<Point> seeds{{0.0, 0.0, 0}, {0.5, -0.25, 0}};
  const auto paths = integrate_particles(traj, seeds);
  for (std::size_t p = 0; p < seeds.size(); ++p) {
    EXPECT_EQ(paths[p].r.front(), seeds[p]);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const Point ax = A.apply(seeds[p]);
      for (int i = 0; i < 2; ++i) {
        EXPECT_NEAR(paths[p].r[k][i], seeds[p][i], 1e-12);
        EXPECT_NEAR(paths[p].F[k].y[i], ax[i] + b[i], 1e-10);
      }
    }
  }
  const McfReport r = verify_mcf(paths, traj);
  EXPECT_LE(r.max_deviation, 1e-10);
  EXPECT_FALSE(r.flagged);
}

TEST(Particles, EscapeIsReported) {
  const BoxDomain d{1, 1.0, 17, 0};
  const GridFunction u = GridFunction::sample(d, [](const Point& x) { return x[0] * x[0]; });
  const std::vector<Snapshot> traj{{u, 0.0, 1.0}, {u, 0.1, 1.0}};
  EXPECT_THROW(integrate_particles(traj, {{0.95, 0, 0}}), EscapeError);
}

TEST(Particles, PathMatchesOversampledReference) {
  const BoxDomain d{1, 3.0, 121, 0};
  auto endpoint = [&](double every) {
    return integrate_particles(bump_run(d, 0.1, 0.6, every), {{0.3, 0, 0}}).front().r.back()[0];
  };
  const double ref = endpoint(0.001);
  const double e1 = std::abs(endpoint(0.02) - ref), e2 = std::abs(endpoint(0.01) - ref);
  EXPECT_GT(std::abs(ref - 0.3), 1e-3);  // the particle moves
  EXPECT_LT(e2, 1e-5);
  EXPECT_GT(e1 / e2, 3.0);
}

TEST(Verify, BumpTangentialSmallAndNegativeControlFlagged) {
  const BoxDomain d{2, 3.0, 65, 0};
  auto traj = bump_run(d, 0.1, 0.5, 0.01);
  std::vector<Point> seeds;
  for (double x : {-0.5, 0.0, 0.5})
    for (double y : {-0.5, 0.0, 0.5}) seeds.push_back({x, y, 0});
  const auto paths = integrate_particles(traj, seeds);
  const McfReport r = verify_mcf(paths, traj);
  EXPECT_FALSE(r.flagged) << r.max_deviation;
  EXPECT_LT(r.max_tangential, 0.1 * r.max_normal);
  EXPECT_EQ(r.samples, seeds.size() * (traj.size() - 2));

  // Non-crossing proxy: pairwise distances stay at least half their start.
  for (std::size_t i = 0; i < paths.size(); ++i)
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      auto dist = [&](std::size_t k) {
        const Point& p = paths[i].r[k];
        const Point& q = paths[j].r[k];
        return std::hypot(p[0] - q[0], p[1] - q[1]);
      };
      EXPECT_GE(dist(traj.size() - 1), 0.5 * dist(0));
    }

  for (Snapshot& s : traj) {
    std::vector<double> v(s.u.values().begin(), s.u.values().end());
    for (double& x : v) x *= 1.1;
    s.u = GridFunction(s.u.domain(), v);
  }
  EXPECT_TRUE(verify_mcf(integrate_particles(traj, seeds), traj).flagged);
}
