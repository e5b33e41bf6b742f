#include "logflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace logflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double boundary_value(const BoundaryModel& b, const Point& x, double t, double tau, double frozen) {
  if (const auto* q = std::get_if<QuadraticFarField>(&b)) return q->value(x, t, tau);
  if (const auto* r = std::get_if<ReferenceSolution>(&b)) return r->fn(x, t);
  return frozen;
}

double boundary_rate(const BoundaryModel& b, const Point& x, double t, double tau) {
  if (const auto* q = std::get_if<QuadraticFarField>(&b)) return q->rate(tau);
  if (const auto* r = std::get_if<ReferenceSolution>(&b)) {
    const double dt = 1e-6 * std::max(1.0, t);
    if (t > dt) return (r->fn(x, t + dt) - r->fn(x, t - dt)) / (2.0 * dt);
    return (r->fn(x, t + dt) - r->fn(x, t)) / dt;
  }
  return 0.0;
}

void apply_boundary(std::vector<double>& values, const BoxDomain& d, const BoundaryModel& b, double t, double tau,
                    const std::vector<double>* frozen) {
  for_each_node(d, 0, [&](std::size_t f, const Index& idx) {
    if (!d.on_boundary(idx)) return;
    values[f] = boundary_value(b, d.coordinate(idx), t, tau, frozen ? (*frozen)[f] : values[f]);
  });
}

// Interior values of F_tau(D^2u); boundary entries are left at zero.
RhsCache evaluate_interior(const GridFunction& u, double tau) {
  const BoxDomain& d = u.domain();
  RhsCache out;
  out.values.assign(d.node_count(), 0.0);
  out.lambda_min_all = kInf;
  out.monitored = {kInf, -kInf};
  const int n = d.n;
  const int mon_lo = 1 + d.interior_margin;
  const int m = d.points_per_axis;
  for_each_node(d, 1, [&](std::size_t f, const Index& idx) {
    const SymMat H = hessian_at(u, idx);
    const EigenBounds eb = eigen_bounds(H);
    double v = (1.0 - tau) * H.trace();
    if (tau > 0.0) {
      const double det = H.determinant();
      if (!(eb.lambda_min > 0.0) || !(det > 0.0))
        throw NonConvexityError("loss of strict convexity at node " + std::to_string(f), f);
      v += tau / n * std::log(det);
    }
    out.values[f] = v;
    out.lambda_min_all = std::min(out.lambda_min_all, eb.lambda_min);
    bool mon = true;
    for (int k = 0; k < n; ++k)
      if (idx[k] < mon_lo || idx[k] > m - 1 - mon_lo) mon = false;
    if (mon) {
      out.monitored.lambda_min = std::min(out.monitored.lambda_min, eb.lambda_min);
      out.monitored.lambda_max = std::max(out.monitored.lambda_max, eb.lambda_max);
    }
  });
  return out;
}

double window_grad_sq(const GridFunction& u, double window) {
  const BoxDomain& d = u.domain();
  double sup = 0.0;
  for_each_node(d, 1 + d.interior_margin, [&](std::size_t, const Index& idx) {
    const Point x = d.coordinate(idx);
    if (window > 0.0)
      for (int k = 0; k < d.n; ++k)
        if (std::abs(x[k]) > window + 1e-12) return;
    const Point g = gradient_at(u, idx);
    sup = std::max(sup, dot(g, g, d.n));
  });
  return sup;
}

double dt_from_lambda(const BoxDomain& d, double tau, double lambda_min_all, double safety) {
  const double h = d.spacing();
  const double mu = (tau > 0.0 ? tau / (d.n * lambda_min_all) : 0.0) + (1.0 - tau);
  return safety * h * h / (2.0 * d.n * mu);
}

}  // namespace

double operator_value(const SymMat& A, double tau) {
  double v = (1.0 - tau) * A.trace();
  if (tau > 0.0) v += tau / A.n * std::log(A.determinant());
  return v;
}

double QuadraticFarField::value(const Point& x, double t, double tau) const {
  return 0.5 * A.quadratic_form(x) + dot(b, x, A.n) + c + t * rate(tau);
}

std::string boundary_kind(const BoundaryModel& b) {
  if (std::holds_alternative<QuadraticFarField>(b)) return "quadratic_far_field";
  if (std::holds_alternative<ReferenceSolution>(b)) return "reference";
  return "frozen";
}

QuadraticFarField corner_far_field(const GridFunction& u0) {
  const BoxDomain& d = u0.domain();
  Index idx{0, 0, 0};
  for (int k = 0; k < d.n; ++k) idx[k] = 1 + d.interior_margin;
  const Point x = d.coordinate(idx);
  QuadraticFarField ff;
  ff.A = hessian_at(u0, idx);
  const Point g = gradient_at(u0, idx);
  const Point Ax = ff.A.apply(x);
  for (int k = 0; k < d.n; ++k) ff.b[k] = g[k] - Ax[k];
  ff.c = u0.at(idx) - 0.5 * dot(x, Ax, d.n) - dot(ff.b, x, d.n);
  return ff;
}

FlowState make_state(const GridFunction& u0, double tau, BoundaryModel boundary, double t0) {
  if (tau < 0.0 || tau > 1.0) throw DomainError("tau must lie in [0, 1]");
  FlowState s;
  s.tau = tau;
  s.t = t0;
  s.boundary = std::move(boundary);
  auto frozen = std::make_shared<std::vector<double>>(u0.values().begin(), u0.values().end());
  std::vector<double> v = *frozen;
  apply_boundary(v, u0.domain(), s.boundary, t0, tau, frozen.get());
  s.frozen_values = frozen;
  s.u = GridFunction(u0.domain(), std::move(v), u0.label());
  return s;
}

GridFunction rhs(const GridFunction& u, double tau) {
  RhsCache c = evaluate_interior(u, tau);
  const BoxDomain& d = u.domain();
  const int m = d.points_per_axis;
  for_each_node(d, 0, [&](std::size_t f, const Index& idx) {
    if (!d.on_boundary(idx)) return;
    Index nearest = idx;
    for (int k = 0; k < d.n; ++k) nearest[k] = std::clamp(idx[k], 1, m - 2);
    c.values[f] = c.values[d.flatten(nearest)];
  });
  return GridFunction(d, std::move(c.values), "rhs");
}

GridFunction rhs(const GridFunction& u, double tau, const BoundaryModel& boundary, double t) {
  RhsCache c = evaluate_interior(u, tau);
  const BoxDomain& d = u.domain();
  for_each_node(d, 0, [&](std::size_t f, const Index& idx) {
    if (d.on_boundary(idx)) c.values[f] = boundary_rate(boundary, d.coordinate(idx), t, tau);
  });
  return GridFunction(d, std::move(c.values), "rhs");
}

double dt_stable(const GridFunction& u, double tau, double safety) {
  if (tau == 0.0) return dt_from_lambda(u.domain(), tau, 1.0, safety);
  const RhsCache c = evaluate_interior(u, tau);
  return dt_from_lambda(u.domain(), tau, c.lambda_min_all, safety);
}

double dt_stable(const FlowState& state, double safety) {
  if (state.rhs_cache) return dt_from_lambda(state.u.domain(), state.tau, state.rhs_cache->lambda_min_all, safety);
  return dt_stable(state.u, state.tau, safety);
}

FlowState step_explicit(const FlowState& state, double dt, const StepOptions& opts) {
  const BoxDomain& d = state.u.domain();
  const auto u = state.u.values();
  const std::size_t N = u.size();
  const double tau = state.tau;

  std::shared_ptr<const RhsCache> k1 = state.rhs_cache;
  if (!k1) k1 = std::make_shared<RhsCache>(evaluate_interior(state.u, tau));

  for (int attempt = 0; attempt <= opts.max_halvings; ++attempt, dt *= 0.5) {
    try {
      std::vector<double> next(N);
      if (opts.stepper == Stepper::Midpoint) {
        std::vector<double> half(N);
        for (std::size_t i = 0; i < N; ++i) half[i] = u[i] + 0.5 * dt * k1->values[i];
        apply_boundary(half, d, state.boundary, state.t + 0.5 * dt, tau, state.frozen_values.get());
        const RhsCache k2 = evaluate_interior(GridFunction(d, std::move(half)), tau);
        for (std::size_t i = 0; i < N; ++i) next[i] = u[i] + dt * k2.values[i];
      } else {
        for (std::size_t i = 0; i < N; ++i) next[i] = u[i] + dt * k1->values[i];
      }
      const double t_new = state.t + dt;
      apply_boundary(next, d, state.boundary, t_new, tau, state.frozen_values.get());
      GridFunction u_new(d, std::move(next), state.u.label());
      auto k3 = std::make_shared<RhsCache>(evaluate_interior(u_new, tau));

      FlowState out;
      out.t = t_new;
      out.tau = tau;
      out.boundary = state.boundary;
      out.step_count = state.step_count + 1;
      out.monitor_log = state.monitor_log;
      out.frozen_values = state.frozen_values;

      MonitorRecord rec;
      rec.t = t_new;
      rec.dt = dt;
      rec.lambda_min = k3->monitored.lambda_min;
      rec.lambda_max = k3->monitored.lambda_max;
      rec.grad_sq_window = window_grad_sq(u_new, opts.monitors.window_half_width);
      rec.d3_norm = opts.monitors.third_derivative ? third_derivative_norm(u_new) : 0.0;
      const auto un = u_new.values();
      double res = 0.0;
      for_each_node(d, 1 + d.interior_margin, [&](std::size_t f, const Index&) {
        const double r = (un[f] - u[f]) / dt - 0.5 * (k1->values[f] + k3->values[f]);
        res = std::max(res, std::abs(r));
      });
      rec.residual = res;
      out.monitor_log.push_back(rec);
      out.u = std::move(u_new);
      out.rhs_cache = std::move(k3);
      return out;
    } catch (const NonConvexityError&) {
      if (attempt == opts.max_halvings) break;
    }
  }
  throw AbortedNonConvex("step rejected after " + std::to_string(opts.max_halvings) +
                             " dt halvings at t = " + std::to_string(state.t),
                         state);
}

std::vector<double> geometric_times(double t0, int count) {
  std::vector<double> ts;
  double t = t0;
  for (int k = 0; k < count; ++k, t *= 2.0) ts.push_back(t);
  return ts;
}

std::vector<double> uniform_times(double t_begin, double t_end, double every) {
  std::vector<double> ts;
  if (!(every > 0.0)) return ts;
  const long count = std::lround((t_end - t_begin) / every);
  for (long k = t_begin > 0.0 ? 0 : 1; k <= count; ++k) ts.push_back(t_begin + k * every);
  return ts;
}

RunResult run(const GridFunction& u0, double tau, double t_end, const BoundaryModel& boundary,
              const RunConfig& config) {
  RunResult result;
  const BoxDomain& d = u0.domain();

  if (const auto* ref = std::get_if<ReferenceSolution>(&boundary)) {
    double diff = 0.0, scale = 0.0;
    for_each_node(d, 0, [&](std::size_t f, const Index& idx) {
      if (!d.on_boundary(idx)) return;
      const double r = ref->fn(d.coordinate(idx), 0.0);
      diff = std::max(diff, std::abs(r - u0[f]));
      scale = std::max(scale, std::abs(r));
    });
    if (diff > 0.1 * std::max(scale, 1e-12))
      throw BoundaryInconsistency("reference solution '" + ref->name + "' disagrees with u0 on the boundary by " +
                                  std::to_string(diff));
  }

  FlowState state = make_state(u0, tau, boundary);
  if (tau > 0.0 || config.record_monitors) state.rhs_cache = std::make_shared<RhsCache>(evaluate_interior(state.u, tau));

  const EigenBounds b0 = state.rhs_cache ? state.rhs_cache->monitored : hessian(state.u).bounds;
  if (config.condition_b) {
    const auto [lambda, Lambda] = *config.condition_b;
    if (!(b0.lambda_min > lambda - 1e-10 && b0.lambda_max < Lambda + 1e-10))
      result.warnings.push_back("initial data violates Condition B on the grid: eigenvalues in [" +
                                std::to_string(b0.lambda_min) + ", " + std::to_string(b0.lambda_max) + "]");
  }
  if (config.record_monitors) {
    MonitorRecord rec;
    rec.t = state.t;
    rec.lambda_min = b0.lambda_min;
    rec.lambda_max = b0.lambda_max;
    rec.grad_sq_window = window_grad_sq(state.u, config.step.monitors.window_half_width);
    rec.d3_norm = config.step.monitors.third_derivative ? third_derivative_norm(state.u) : 0.0;
    state.monitor_log.push_back(rec);
  }
  result.snapshots.push_back({state.u, state.t, tau});

  std::vector<double> targets;
  for (double ts : config.snapshot_times)
    if (ts > 0.0 && ts < t_end) targets.push_back(ts);
  targets.push_back(t_end);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  for (double target : targets) {
    while (state.t < target) {
      double dt = config.dt_fixed > 0.0 ? config.dt_fixed : dt_stable(state, config.safety);
      if (config.dt_max > 0.0) dt = std::min(dt, config.dt_max);
      bool lands = false;
      if (state.t + dt >= target * (1.0 - 1e-12)) {
        dt = target - state.t;
        lands = true;
      }
      FlowState next = step_explicit(state, dt, config.step);
      // A halved step may stop short of the target.
      if (lands && next.t == state.t + dt) {
        next.t = target;
        if (!next.monitor_log.empty()) next.monitor_log.back().t = target;
      }
      if (!config.record_monitors) next.monitor_log.clear();
      state = std::move(next);
    }
    result.snapshots.push_back({state.u, state.t, tau});
  }
  result.final_state = std::move(state);
  return result;
}

double pde_residual(const Snapshot& start, const Snapshot& mid, const Snapshot& end) {
  const BoxDomain& d = start.u.domain();
  if (!(d == mid.u.domain()) || !(d == end.u.domain())) throw DomainError("pde_residual: snapshot domains differ");
  const double dt = end.t - start.t;
  if (!(dt > 0.0)) throw DomainError("pde_residual: snapshots must be increasing in time");
  const RhsCache r = evaluate_interior(mid.u, mid.tau);
  const auto a = start.u.values();
  const auto b = end.u.values();
  double res = 0.0;
  for_each_node(d, 1 + d.interior_margin, [&](std::size_t f, const Index&) {
    res = std::max(res, std::abs((b[f] - a[f]) / dt - r.values[f]));
  });
  return res;
}

double pde_residual(const std::function<GridFunction(double)>& trajectory, double t, double dt_probe, double tau) {
  return pde_residual(Snapshot{trajectory(t), t, tau}, Snapshot{trajectory(t + 0.5 * dt_probe), t + 0.5 * dt_probe, tau},
                      Snapshot{trajectory(t + dt_probe), t + dt_probe, tau});
}

}  // namespace logflow
