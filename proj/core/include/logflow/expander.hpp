#pragma once

#include <functional>
#include <string>
#include <vector>

#include "logflow/flow.hpp"
#include "logflow/grid.hpp"

namespace logflow {

/// Self-expander equation det D^2u = exp{n(u - x.Du/2)} reduced to one
/// variable. For n >= 2 the profile is radial, u = u(|x|), and the ODE
/// u'' (u'/r)^(n-1) = exp{n(u - r u'/2)} starts from a series at r0 because
/// u'/r -> u''(0) = e^a there. For n = 1 the equation is regular at the
/// origin and the initial slope may be nonzero, which produces profiles that
/// are not quadratic.
struct RadialExpanderProblem {
  int n = 1;
  /// u(0).
  double a = 0.0;
  double r_max = 4.0;
  /// Absolute and relative tolerance of the embedded Runge-Kutta pair.
  double tolerance = 1e-12;
  /// u'(0); only n = 1 admits a nonzero value.
  double slope = 0.0;
  /// Spacing of the stored samples.
  double sample_spacing = 1e-3;
};

struct RadialSample {
  double r = 0.0;
  double u = 0.0;
  double du = 0.0;
  double d2u = 0.0;
};

/// Samples of a shot profile with quintic Hermite interpolation between them.
/// For n = 1 the abscissa is the signed coordinate on [-r_max, r_max], for
/// n >= 2 the radius on [0, r_max].
class ExpanderProfile {
 public:
  ExpanderProfile() = default;
  ExpanderProfile(RadialExpanderProblem problem, std::vector<RadialSample> samples);

  const RadialExpanderProblem& problem() const { return problem_; }
  const std::vector<RadialSample>& samples() const { return samples_; }
  int n() const { return problem_.n; }

  /// u, u', u'' at abscissa s. Throws RangeError outside the sampled range.
  RadialSample at(double s) const;
  double value(double s) const { return at(s).u; }
  /// u(x) for a point of R^n.
  double evaluate(const Point& x) const;

 private:
  RadialExpanderProblem problem_;
  std::vector<RadialSample> samples_;
};

/// Throws BlowupError if u'' leaves (0, 1e6) and SingularStartError if the
/// series start is inconsistent (nonzero slope for n >= 2, r_max too small).
ExpanderProfile radial_shoot(const RadialExpanderProblem& problem);

/// Nodewise det D^2u - exp{n(u - x.Du/2)} on interior nodes, zero on the
/// boundary layer. Throws NonConvexityError.
GridFunction expander_residual(const GridFunction& u);

struct NewtonOptions {
  double tolerance = 1e-10;
  int max_iterations = 50;
  double min_step = 1.0 / 1048576.0;
  /// Time at which the boundary model supplies the Dirichlet data. A flow
  /// model t U(x / sqrt t) reduces to U at t = 1.
  double boundary_time = 1.0;
};

struct ExpanderSolution {
  GridFunction u;
  double residual_norm = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;
  EigenBounds condition_B;
};

/// Damped Newton iteration for the discrete self-expander equation with the
/// boundary layer held at the model's Dirichlet values. The Jacobian is exact
/// for the discretisation and is factorised with a sparse LU.
///
/// Throws NonConvexityError when u_init is not convex or no step along the
/// Newton direction keeps convexity, NewtonStall when the line search or the
/// iteration budget is exhausted.
ExpanderSolution newton_solve(const GridFunction& u_init, const BoundaryModel& boundary,
                              const NewtonOptions& options = {});

struct CertifyOptions {
  std::vector<double> scales{2.0, 4.0};
  /// Largest accepted expander residual.
  double residual_tolerance = 1e-6;
  /// w counts as constant when its oscillation is below this.
  double w_constant_tolerance = 1e-8;
};

struct CertificationReport {
  bool certified = false;
  std::string reason;
  double residual_norm = 0.0;
  EigenBounds condition_B;
  /// max over scales R of |R^-2 u(R x) - U0(x)| at coincident nodes, with U0
  /// the orthant-wise far-field quadratic read off the corner Hessians.
  double condition_A_defect = 0.0;
  /// sup |u^ij w_ij + (n/2) x.Dw| with w = u - x.Du/2.
  double bernstein_residual = 0.0;
  double w_oscillation = 0.0;
  bool quadratic_case = false;
  /// w attains its max or min away from the outer monitored layer.
  bool w_interior_extremum = false;
};

CertificationReport certify(const GridFunction& u, const CertifyOptions& options = {});
CertificationReport certify(const ExpanderSolution& solution, const CertifyOptions& options = {});

/// w = u - x.Du/2 sampled on the grid.
GridFunction bernstein_w(const GridFunction& u);
/// Nodewise u^ij w_ij + (n/2) x.Dw on nodes at least two layers inside.
GridFunction bernstein_residual(const GridFunction& u);

/// Samples the profile on a grid.
GridFunction sample_profile(const ExpanderProfile& profile, const BoxDomain& domain);

/// The flow generated by the expander: u(x, t) = t U(x / sqrt t).
ReferenceSolution expander_flow(const ExpanderProfile& profile);

}  // namespace logflow
