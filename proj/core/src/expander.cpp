#include "logflow/expander.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>

#include "logflow/analysis.hpp"

namespace logflow {
namespace {

namespace odeint = boost::numeric::odeint;
using OdeState = std::array<double, 2>;

constexpr double kSeriesRadius = 1e-4;
constexpr double kBlowup = 1e6;

double second_derivative(int n, double r, const OdeState& y) {
  const double expo = std::exp(n * (y[0] - 0.5 * r * y[1]));
  if (n == 1) return expo;
  const double q = y[1] / r;
  if (!(q > 0.0)) throw BlowupError("radial profile lost monotonicity at r = " + std::to_string(r));
  return std::pow(q, 1 - n) * expo;
}

void check_curvature(double r, double d2u) {
  if (!(d2u > 0.0 && d2u < kBlowup))
    throw BlowupError("u'' = " + std::to_string(d2u) + " left (0, 1e6) at r = " + std::to_string(r));
}

// Integrates forward from (r_start, y) and appends samples at the given
// abscissae (all > r_start).
void shoot(int n, double r_start, OdeState y, const std::vector<double>& times, double tol, double max_dt,
           std::vector<RadialSample>& out) {
  auto system = [n](const OdeState& s, OdeState& ds, double r) {
    ds[0] = s[1];
    ds[1] = second_derivative(n, r, s);
    check_curvature(r, ds[1]);
  };
  std::vector<double> grid;
  grid.reserve(times.size() + 1);
  grid.push_back(r_start);
  grid.insert(grid.end(), times.begin(), times.end());
  auto stepper = odeint::make_controlled(tol, tol, max_dt, odeint::runge_kutta_dopri5<OdeState>());
  bool first = true;
  odeint::integrate_times(stepper, system, y, grid.begin(), grid.end(), 0.1 * max_dt,
                          [&](const OdeState& s, double r) {
                            if (first) {
                              first = false;
                              return;
                            }
                            const double d2 = second_derivative(n, r, s);
                            check_curvature(r, d2);
                            out.push_back({r, s[0], s[1], d2});
                          });
}

std::vector<double> sample_points(double from, double to, double ds) {
  std::vector<double> ts;
  const long count = std::max(1L, static_cast<long>(std::ceil((to - from) / ds - 1e-9)));
  for (long k = 1; k <= count; ++k) ts.push_back(k == count ? to : from + (to - from) * k / count);
  return ts;
}

struct ResidualEval {
  std::vector<double> values;
  double norm = 0.0;
  bool convex = true;
};

ResidualEval evaluate_residual(const GridFunction& u) {
  const BoxDomain& d = u.domain();
  ResidualEval r;
  r.values.assign(d.node_count(), 0.0);
  for_each_node(d, 1, [&](std::size_t f, const Index& idx) {
    const SymMat H = hessian_at(u, idx);
    if (!H.positive_definite()) r.convex = false;
    const Point x = d.coordinate(idx);
    const Point g = gradient_at(u, idx);
    const double v = H.determinant() - std::exp(d.n * (u[f] - 0.5 * dot(x, g, d.n)));
    r.values[f] = v;
    r.norm = std::max(r.norm, std::abs(v));
  });
  return r;
}

double dirichlet_value(const BoundaryModel& b, const Point& x, double t, double fallback) {
  if (const auto* q = std::get_if<QuadraticFarField>(&b)) return q->value(x, t, 1.0);
  if (const auto* ref = std::get_if<ReferenceSolution>(&b)) return ref->fn(x, t);
  return fallback;
}

}  // namespace

ExpanderProfile::ExpanderProfile(RadialExpanderProblem problem, std::vector<RadialSample> samples)
    : problem_(problem), samples_(std::move(samples)) {}

RadialSample ExpanderProfile::at(double s) const {
  if (samples_.size() < 2) throw RangeError("empty expander profile");
  const double lo = samples_.front().r, hi = samples_.back().r;
  if (s < lo - 1e-12 || s > hi + 1e-12)
    throw RangeError("abscissa " + std::to_string(s) + " outside the shot range [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
  s = std::clamp(s, lo, hi);
  auto it = std::upper_bound(samples_.begin(), samples_.end(), s,
                             [](double v, const RadialSample& p) { return v < p.r; });
  if (it == samples_.end()) --it;
  if (it == samples_.begin()) ++it;
  const RadialSample& p0 = *(it - 1);
  const RadialSample& p1 = *it;
  const double h = p1.r - p0.r;
  const double t = (s - p0.r) / h;
  const double dy = p1.u - p0.u;
  const double c0 = p0.u, c1 = h * p0.du, c2 = 0.5 * h * h * p0.d2u;
  const double c3 = 10 * dy - 6 * h * p0.du - 4 * h * p1.du - 1.5 * h * h * p0.d2u + 0.5 * h * h * p1.d2u;
  const double c4 = -15 * dy + 8 * h * p0.du + 7 * h * p1.du + 1.5 * h * h * p0.d2u - h * h * p1.d2u;
  const double c5 = 6 * dy - 3 * h * p0.du - 3 * h * p1.du - 0.5 * h * h * p0.d2u + 0.5 * h * h * p1.d2u;
  RadialSample out;
  out.r = s;
  out.u = c0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))));
  out.du = (c1 + t * (2 * c2 + t * (3 * c3 + t * (4 * c4 + t * 5 * c5)))) / h;
  out.d2u = (2 * c2 + t * (6 * c3 + t * (12 * c4 + t * 20 * c5))) / (h * h);
  return out;
}

double ExpanderProfile::evaluate(const Point& x) const {
  if (problem_.n == 1) return at(x[0]).u;
  return at(std::sqrt(dot(x, x, problem_.n))).u;
}

ExpanderProfile radial_shoot(const RadialExpanderProblem& p) {
  if (p.n < 1 || p.n > kMaxDim) throw DomainError("radial_shoot supports n = 1, 2, 3");
  if (!(p.r_max > 0.0) || !(p.tolerance > 0.0) || !(p.sample_spacing > 0.0))
    throw DomainError("radial_shoot needs positive r_max, tolerance and sample spacing");
  const double ds = std::min(p.sample_spacing, p.r_max / 4.0);
  std::vector<RadialSample> samples;

  if (p.n == 1) {
    // The equation is invariant under s -> -s together with u' -> -u', so
    // the left half is the right half of the mirrored problem.
    std::vector<RadialSample> left;
    shoot(1, 0.0, {p.a, -p.slope}, sample_points(0.0, p.r_max, ds), p.tolerance, ds, left);
    for (auto it = left.rbegin(); it != left.rend(); ++it) samples.push_back({-it->r, it->u, -it->du, it->d2u});
    samples.push_back({0.0, p.a, p.slope, std::exp(p.a)});
    shoot(1, 0.0, {p.a, p.slope}, sample_points(0.0, p.r_max, ds), p.tolerance, ds, samples);
    return ExpanderProfile(p, std::move(samples));
  }

  if (p.slope != 0.0)
    throw SingularStartError("a radial profile in dimension " + std::to_string(p.n) + " needs u'(0) = 0");
  if (p.r_max <= 2.0 * kSeriesRadius) throw SingularStartError("r_max is inside the series start region");
  // u''(0)^n = exp(n a), so u''(0) = e^a and u = a + e^a r^2 / 2 near 0.
  const double c = std::exp(p.a);
  const OdeState start{p.a + 0.5 * c * kSeriesRadius * kSeriesRadius, c * kSeriesRadius};
  const double d2 = second_derivative(p.n, kSeriesRadius, start);
  if (!(std::abs(d2 - c) <= 1e-6 * c)) throw SingularStartError("series start inconsistent with the ODE");
  samples.push_back({0.0, p.a, 0.0, c});
  samples.push_back({kSeriesRadius, start[0], start[1], d2});
  shoot(p.n, kSeriesRadius, start, sample_points(kSeriesRadius, p.r_max, ds), p.tolerance, ds, samples);
  return ExpanderProfile(p, std::move(samples));
}

GridFunction expander_residual(const GridFunction& u) {
  const BoxDomain& d = u.domain();
  std::vector<double> out(d.node_count(), 0.0);
  for_each_node(d, 1, [&](std::size_t f, const Index& idx) {
    const SymMat H = hessian_at(u, idx);
    if (!H.positive_definite()) throw NonConvexityError("expander residual needs a convex argument", f);
    const Point x = d.coordinate(idx);
    const Point g = gradient_at(u, idx);
    out[f] = H.determinant() - std::exp(d.n * (u[f] - 0.5 * dot(x, g, d.n)));
  });
  return GridFunction(d, std::move(out), "expander_residual");
}

ExpanderSolution newton_solve(const GridFunction& u_init, const BoundaryModel& boundary, const NewtonOptions& opt) {
  const BoxDomain& d = u_init.domain();
  const int n = d.n;
  const int m = d.points_per_axis;
  const double h = d.spacing();

  std::vector<double> u(u_init.values().begin(), u_init.values().end());
  std::vector<long> unknown(d.node_count(), -1);
  long count = 0;
  for_each_node(d, 0, [&](std::size_t f, const Index& idx) {
    if (d.on_boundary(idx))
      u[f] = dirichlet_value(boundary, d.coordinate(idx), opt.boundary_time, u[f]);
    else
      unknown[f] = count++;
  });

  GridFunction current(d, u, u_init.label());
  ResidualEval res = evaluate_residual(current);
  if (!res.convex) throw NonConvexityError("initial guess for the expander Newton solve is not convex", 0);

  ExpanderSolution sol;
  sol.residual_history.push_back(res.norm);

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (int it = 0;; ++it) {
    if (res.norm <= opt.tolerance) break;
    if (it >= opt.max_iterations)
      throw NewtonStall("no convergence after " + std::to_string(opt.max_iterations) +
                        " iterations, residual " + std::to_string(res.norm));

    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd rhs(count);
    const double inv_h = 1.0 / h, inv_h2 = inv_h * inv_h;
    for_each_node(d, 1, [&](std::size_t f, const Index& idx) {
      const long row = unknown[f];
      const SymMat H = hessian_at(current, idx);
      const SymMat adj = H.adjugate();
      const Point x = d.coordinate(idx);
      const Point g = gradient_at(current, idx);
      const double E = std::exp(n * (current[f] - 0.5 * dot(x, g, n)));
      rhs[row] = -res.values[f];
      auto add = [&](std::ptrdiff_t offset, double w) {
        const long col = unknown[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(f) + offset)];
        if (col >= 0) triplets.emplace_back(row, col, w);
      };
      add(0, -E * n);
      for (int k = 0; k < n; ++k) {
        const auto sk = static_cast<std::ptrdiff_t>(d.stride(k));
        const Stencil s2 = second_difference(idx[k], m);
        for (int q = 0; q < s2.count; ++q) add(s2.offset[q] * sk, adj(k, k) * s2.weight[q] * inv_h2);
        const Stencil s1 = first_difference(idx[k], m);
        for (int q = 0; q < s1.count; ++q) add(s1.offset[q] * sk, E * n * 0.5 * x[k] * s1.weight[q] * inv_h);
        for (int l = k + 1; l < n; ++l) {
          const auto sl = static_cast<std::ptrdiff_t>(d.stride(l));
          const Stencil a = first_difference(idx[k], m);
          const Stencil b = first_difference(idx[l], m);
          for (int p = 0; p < a.count; ++p)
            for (int q = 0; q < b.count; ++q)
              add(a.offset[p] * sk + b.offset[q] * sl, 2.0 * adj(k, l) * a.weight[p] * b.weight[q] * inv_h2);
        }
      }
    });
    Eigen::SparseMatrix<double> J(count, count);
    J.setFromTriplets(triplets.begin(), triplets.end());
    if (it == 0) lu.analyzePattern(J);
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw NewtonStall("singular Newton Jacobian at iteration " + std::to_string(it));
    const Eigen::VectorXd delta = lu.solve(rhs);

    bool accepted = false, any_convex = false;
    for (double step = 1.0; step >= opt.min_step; step *= 0.5) {
      std::vector<double> trial(current.values().begin(), current.values().end());
      for (std::size_t f = 0; f < trial.size(); ++f)
        if (unknown[f] >= 0) trial[f] += step * delta[unknown[f]];
      GridFunction candidate(d, std::move(trial), u_init.label());
      ResidualEval r = evaluate_residual(candidate);
      if (!r.convex) continue;
      any_convex = true;
      if (r.norm < (1.0 - 1e-4 * step) * res.norm) {
        current = std::move(candidate);
        res = std::move(r);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!any_convex)
        throw NonConvexityError("every Newton step down to 2^-20 loses convexity at iteration " + std::to_string(it), 0);
      throw NewtonStall("line search failed at iteration " + std::to_string(it) + ", residual " +
                        std::to_string(res.norm));
    }
    sol.iterations = it + 1;
    sol.residual_history.push_back(res.norm);
  }

  sol.residual_norm = res.norm;
  sol.condition_B = hessian(current).bounds;
  sol.u = std::move(current);
  return sol;
}

GridFunction bernstein_w(const GridFunction& u) {
  const BoxDomain& d = u.domain();
  std::vector<double> w(d.node_count());
  for_each_node(d, 0, [&](std::size_t f, const Index& idx) {
    w[f] = u[f] - 0.5 * dot(d.coordinate(idx), gradient_at(u, idx), d.n);
  });
  return GridFunction(d, std::move(w), "w");
}

GridFunction bernstein_residual(const GridFunction& u) {
  const BoxDomain& d = u.domain();
  const GridFunction w = bernstein_w(u);
  std::vector<double> out(d.node_count(), 0.0);
  for_each_node(d, std::max(2, 1 + d.interior_margin), [&](std::size_t f, const Index& idx) {
    const SymMat Hinv = hessian_at(u, idx).inverse();
    const SymMat Hw = hessian_at(w, idx);
    double tr = 0.0;
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j) tr += Hinv(i, j) * Hw(i, j);
    out[f] = tr + 0.5 * d.n * dot(d.coordinate(idx), gradient_at(w, idx), d.n);
  });
  return GridFunction(d, std::move(out), "bernstein_residual");
}

CertificationReport certify(const GridFunction& u, const CertifyOptions& opt) {
  const BoxDomain& d = u.domain();
  CertificationReport rep;
  const HessianField hf = hessian(u);
  rep.condition_B = hf.bounds;
  if (!(hf.bounds.lambda_min > 0.0)) {
    rep.reason = "not strictly convex on the monitored interior";
    return rep;
  }
  const int lo = 1 + d.interior_margin;
  const GridFunction r = expander_residual(u);
  for_each_node(d, lo, [&](std::size_t f, const Index&) { rep.residual_norm = std::max(rep.residual_norm, std::abs(r[f])); });

  // Orthant-wise far-field quadratic from the corner Hessians.
  const int m = d.points_per_axis;
  const int corners = 1 << d.n;
  std::vector<SymMat> corner_A(corners);
  for (int c = 0; c < corners; ++c) {
    Index idx{0, 0, 0};
    for (int k = 0; k < d.n; ++k) idx[k] = (c >> k & 1) ? m - 1 - lo : lo;
    corner_A[c] = hf.matrices[d.flatten(idx)];
  }
  auto U0 = [&](const Point& x) {
    int c = 0;
    for (int k = 0; k < d.n; ++k)
      if (x[k] > 0.0) c |= 1 << k;
    return 0.5 * corner_A[c].quadratic_form(x);
  };
  bool any = false;
  for (double R : opt.scales) {
    for (const auto& pair : coincident_nodes(d, R)) {
      any = true;
      const Point x = d.coordinate(pair.node);
      rep.condition_A_defect = std::max(rep.condition_A_defect, std::abs(u[pair.scaled] / (R * R) - U0(x)));
    }
  }
  if (!any) rep.condition_A_defect = std::numeric_limits<double>::quiet_NaN();

  const GridFunction br = bernstein_residual(u);
  const GridFunction w = bernstein_w(u);
  double wmin = std::numeric_limits<double>::infinity(), wmax = -wmin;
  Index argmin{}, argmax{};
  for_each_node(d, lo, [&](std::size_t f, const Index& idx) {
    if (w[f] < wmin) wmin = w[f], argmin = idx;
    if (w[f] > wmax) wmax = w[f], argmax = idx;
  });
  for_each_node(d, std::max(2, lo), [&](std::size_t f, const Index&) {
    rep.bernstein_residual = std::max(rep.bernstein_residual, std::abs(br[f]));
  });
  rep.w_oscillation = wmax - wmin;
  rep.quadratic_case = rep.w_oscillation <= opt.w_constant_tolerance;
  rep.w_interior_extremum = rep.quadratic_case || d.within(argmin, lo + 1) || d.within(argmax, lo + 1);

  if (rep.residual_norm > opt.residual_tolerance) {
    rep.reason = "expander residual " + std::to_string(rep.residual_norm) + " exceeds " +
                 std::to_string(opt.residual_tolerance);
    return rep;
  }
  rep.certified = true;
  rep.reason = rep.quadratic_case ? "quadratic (Pogorelov) case" : "non-quadratic expander";
  return rep;
}

CertificationReport certify(const ExpanderSolution& solution, const CertifyOptions& options) {
  return certify(solution.u, options);
}

GridFunction sample_profile(const ExpanderProfile& profile, const BoxDomain& domain) {
  if (domain.n != profile.n()) throw DomainError("profile and grid dimensions differ");
  return GridFunction::sample(domain, [&](const Point& x) { return profile.evaluate(x); }, "expander");
}

ReferenceSolution expander_flow(const ExpanderProfile& profile) {
  return {"expander", [profile](const Point& x, double t) {
            if (!(t > 0.0)) throw DomainError("the expander flow is defined for t > 0");
            const double s = std::sqrt(t);
            Point y{};
            for (int k = 0; k < profile.n(); ++k) y[k] = x[k] / s;
            return t * profile.evaluate(y);
          }};
}

}  // namespace logflow
