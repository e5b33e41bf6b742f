#include <gtest/gtest.h>

#include <cmath>

#include "logflow/expander.hpp"
#include "logflow/flow.hpp"
#include "oracles.hpp"

using namespace logflow;

namespace {

GridFunction quadratic(const BoxDomain& d, const SymMat& A, double c = 0.0) {
  return GridFunction::sample(d, [&](const Point& x) { return 0.5 * A.quadratic_form(x) + c; });
}

RadialExpanderProblem slope_problem(double slope = 0.2) {
  RadialExpanderProblem p;
  p.n = 1;
  p.a = -0.1;
  p.slope = slope;
  p.r_max = 4.0;
  return p;
}

ExpanderSolution newton_from_profile(const ExpanderProfile& prof, const BoxDomain& d) {
  const GridFunction exact = sample_profile(prof, d);
  const double L = d.half_width;
  const double left = exact[0] - 0.5 * L * L, right = exact[exact.size() - 1] - 0.5 * L * L;
  const GridFunction init = GridFunction::sample(d, [&](const Point& x) {
    return 0.5 * x[0] * x[0] + 0.5 * (left + right) + 0.5 * (right - left) * x[0] / L;
  });
  return newton_solve(init, expander_flow(prof));
}

}  // namespace

TEST(ExpanderResidual, Examples) {
  const BoxDomain d2{2, 1.0, 9, 0};
  const GridFunction r0 = expander_residual(quadratic(d2, SymMat::identity(2)));
  for_each_node(d2, 1, [&](std::size_t f, const Index&) { EXPECT_NEAR(r0[f], 0.0, 1e-12); });
  const Index origin{4, 4, 0};
  EXPECT_NEAR(expander_residual(quadratic(d2, SymMat::scaled_identity(2, 2.0)))[d2.flatten(origin)], 3.0, 1e-12);
  const BoxDomain d1{1, 1.0, 9, 0};
  const GridFunction r1 = expander_residual(GridFunction::sample(d1, [](const Point& x) { return 0.6 * x[0] * x[0]; }));
  EXPECT_NEAR(r1[4], 0.2, 1e-12);
}

TEST(ExpanderResidual, NonConvexRaises) {
  const BoxDomain d{1, 1.0, 9, 0};
  EXPECT_THROW(expander_residual(GridFunction::sample(d, [](const Point& x) { return -x[0] * x[0]; })),
               NonConvexityError);
}

TEST(RadialShoot, TrivialExpanderInOneAndTwoDimensions) {
  for (int n : {1, 2}) {
    RadialExpanderProblem p;
    p.n = n;
    p.r_max = 3.0;
    const ExpanderProfile prof = radial_shoot(p);
    for (double r : {0.0, 0.5, 1.7, 3.0}) {
      EXPECT_NEAR(prof.value(r), 0.5 * r * r, 1e-10) << "n=" << n << " r=" << r;
      EXPECT_NEAR(prof.at(r).d2u, 1.0, 1e-9);
    }
  }
}

TEST(RadialShoot, ZeroSlopeProfilesAreQuadratic) {
  // With u'(0) = 0 the profile is a + exp(a) r^2 / 2 in every dimension.
  for (int n : {1, 2, 3}) {
    RadialExpanderProblem p;
    p.n = n;
    p.a = -0.1;
    const ExpanderProfile prof = radial_shoot(p);
    for (double r : {0.3, 1.0, 2.5}) EXPECT_NEAR(prof.value(r), -0.1 + 0.5 * std::exp(-0.1) * r * r, 1e-9);
  }
}

TEST(RadialShoot, ValueAtOneMatchesRk4Oracle) {
  for (double slope : {0.0, 0.2}) {
    const ExpanderProfile prof = radial_shoot(slope_problem(slope));
    const auto ref = oracle::expander_1d(-0.1, slope, 1.0, 20000);
    EXPECT_NEAR(prof.value(1.0), ref[0], 1e-8);
    EXPECT_NEAR(prof.at(1.0).du, ref[1], 1e-8);
    // The left half solves the mirrored problem.
    const auto left = oracle::expander_1d(-0.1, -slope, 1.0, 20000);
    EXPECT_NEAR(prof.value(-1.0), left[0], 1e-8);
  }
}

TEST(RadialShoot, SlopedProfileIsStrictlyConvexAndNonQuadratic) {
  const ExpanderProfile prof = radial_shoot(slope_problem());
  double lo = 1e300, hi = 0.0;
  for (const RadialSample& s : prof.samples()) {
    EXPECT_GT(s.d2u, 0.0);
    lo = std::min(lo, s.d2u);
    hi = std::max(hi, s.d2u);
  }
  EXPECT_GT(hi - lo, 0.1);
}

TEST(RadialShoot, Errors) {
  RadialExpanderProblem p;
  p.n = 1;
  p.a = 15.0;  // u'' = exp(15) > 1e6 at the start
  EXPECT_THROW(radial_shoot(p), BlowupError);
  RadialExpanderProblem q;
  q.n = 2;
  q.slope = 0.1;
  EXPECT_THROW(radial_shoot(q), SingularStartError);
  q.slope = 0.0;
  q.r_max = 1e-4;
  EXPECT_THROW(radial_shoot(q), SingularStartError);
  const ExpanderProfile prof = radial_shoot(slope_problem());
  EXPECT_THROW(prof.at(4.5), RangeError);
}

TEST(Newton, PerturbedIdentityConverges) {
  const BoxDomain d{2, 1.5, 17, 0};
  oracle::Generator gen(99);
  const GridFunction base = quadratic(d, SymMat::identity(2));
  std::vector<double> v(base.values().begin(), base.values().end());
  for_each_node(d, 1, [&](std::size_t f, const Index&) { v[f] += 1e-3 * gen.uniform(-1, 1); });
  const ExpanderSolution s = newton_solve(GridFunction(d, v), QuadraticFarField{SymMat::identity(2)});
  EXPECT_LE(s.residual_norm, 1e-10);
  EXPECT_LE(s.iterations, 6);
  EXPECT_LT(s.u.interior_sup_distance(base), 1e-9);
  EXPECT_EQ(s.residual_history.size(), static_cast<std::size_t>(s.iterations) + 1);
}

TEST(Newton, RadialProfileInThePlane) {
  RadialExpanderProblem p;
  p.n = 2;
  p.a = -0.1;
  const ExpanderProfile prof = radial_shoot(p);
  const BoxDomain d{2, 1.5, 25, 0};
  const GridFunction exact = sample_profile(prof, d);
  oracle::Generator gen(4);
  std::vector<double> v(exact.values().begin(), exact.values().end());
  for_each_node(d, 1, [&](std::size_t f, const Index&) { v[f] += 1e-3 * gen.uniform(-1, 1); });
  const ExpanderSolution s = newton_solve(GridFunction(d, v), expander_flow(prof));
  EXPECT_LE(s.residual_norm, 1e-9);
  EXPECT_LT(s.u.interior_sup_distance(exact), 1e-8);
}

TEST(Newton, SlopedProfileAgreesAtSecondOrder) {
  const ExpanderProfile prof = radial_shoot(slope_problem());
  std::vector<double> err;
  for (int m : {65, 129}) {
    const BoxDomain d{1, 2.0, m, 0};
    const ExpanderSolution s = newton_from_profile(prof, d);
    EXPECT_LE(s.residual_norm, 1e-9);
    err.push_back(s.u.interior_sup_distance(sample_profile(prof, d)));
  }
  EXPECT_LT(err[1], 1e-4);
  EXPECT_NEAR(err[0] / err[1], 4.0, 0.6);
}

TEST(Newton, InconsistentBoundaryIsReported) {
  const BoxDomain d{2, 1.0, 9, 0};
  QuadraticFarField low{SymMat::identity(2)};
  low.c = -5.0;
  bool raised = false;
  try {
    newton_solve(quadratic(d, SymMat::identity(2)), low);
  } catch (const NonConvexityError&) {
    raised = true;
  } catch (const NewtonStall&) {
    raised = true;
  }
  EXPECT_TRUE(raised);
}

TEST(Certify, TrivialExpander) {
  const BoxDomain d{2, 2.0, 17, 0};
  const CertificationReport r = certify(quadratic(d, SymMat::identity(2)));
  EXPECT_TRUE(r.certified);
  EXPECT_TRUE(r.quadratic_case);
  EXPECT_NEAR(r.condition_A_defect, 0.0, 1e-12);
  EXPECT_NEAR(r.bernstein_residual, 0.0, 1e-12);
  EXPECT_NEAR(r.w_oscillation, 0.0, 1e-12);
  EXPECT_NEAR(r.condition_B.lambda_min, 1.0, 1e-12);
}

TEST(Certify, AnisotropicQuadraticIsRefused) {
  const BoxDomain d{2, 1.0, 9, 0};
  const CertificationReport r = certify(quadratic(d, SymMat::scaled_identity(2, 2.0)));
  EXPECT_FALSE(r.certified);
  EXPECT_GT(r.residual_norm, 1.0);
}

TEST(Certify, NonConvexIsRefused) {
  const BoxDomain d{1, 1.0, 9, 0};
  EXPECT_FALSE(certify(GridFunction::sample(d, [](const Point& x) { return -x[0] * x[0]; })).certified);
}

TEST(Certify, SlopedExpanderBernsteinSecondOrder) {
  const ExpanderProfile prof = radial_shoot(slope_problem());
  std::vector<double> res;
  for (int m : {65, 129}) {
    const CertificationReport r = certify(newton_from_profile(prof, {1, 2.0, m, 0}));
    EXPECT_TRUE(r.certified) << r.reason;
    EXPECT_FALSE(r.quadratic_case);
    EXPECT_GT(r.w_oscillation, 0.1);
    res.push_back(r.bernstein_residual);
  }
  EXPECT_NEAR(res[0] / res[1], 4.0, 0.6);
}

// Property: rescaling an expander gives a solution of the flow.
TEST(ExpanderProperty, SelfSimilarFlowResidualSecondOrder) {
  const ExpanderProfile prof = radial_shoot(slope_problem());
  const ReferenceSolution flow = expander_flow(prof);
  std::vector<double> worst;
  for (int m : {65, 129}) {
    const BoxDomain d{1, 2.0, m, 0};
    auto traj = [&](double t) { return GridFunction::sample(d, [&](const Point& x) { return flow.fn(x, t); }); };
    double w = 0.0;
    for (double t : {1.0, 2.0, 4.0}) w = std::max(w, pde_residual(traj, t, 1e-3, 1.0));
    worst.push_back(w);
  }
  EXPECT_LT(worst[0], 1e-4);
  EXPECT_NEAR(worst[0] / worst[1], 4.0, 0.6);
  EXPECT_THROW(flow.fn({0.5, 0, 0}, 0.0), DomainError);
}

TEST(ExpanderProperty, OnlyTheQuadraticHasInteriorExtremaOfW) {
  for (double slope : {0.1, 0.2, -0.15}) {
    const CertificationReport r = certify(newton_from_profile(radial_shoot(slope_problem(slope)), {1, 2.0, 65, 0}));
    EXPECT_FALSE(r.quadratic_case);
    EXPECT_FALSE(r.w_interior_extremum) << "slope " << slope;
  }
  const CertificationReport q = certify(quadratic({1, 2.0, 65, 0}, SymMat::identity(1)));
  EXPECT_TRUE(q.quadratic_case);
}
