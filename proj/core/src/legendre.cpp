#include "logflow/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logflow/interpolation.hpp"

namespace logflow {
namespace {

// Best node among the 3^n neighbourhood, repeated until no neighbour improves.
std::size_t ascend(const BoxDomain& d, std::span<const double> u, const Point& y, std::size_t start) {
  const int n = d.n;
  const int m = d.points_per_axis;
  auto objective = [&](std::size_t f) { return dot(d.coordinate(f), y, n) - u[f]; };
  std::size_t cur = start;
  double best = objective(cur);
  for (;;) {
    const Index c = d.unflatten(cur);
    std::size_t next = cur;
    int total = 1;
    for (int k = 0; k < n; ++k) total *= 3;
    for (int code = 0; code < total; ++code) {
      Index idx = c;
      int rest = code;
      bool inside = true;
      for (int k = 0; k < n; ++k, rest /= 3) {
        idx[k] += rest % 3 - 1;
        if (idx[k] < 0 || idx[k] >= m) inside = false;
      }
      if (!inside) continue;
      const std::size_t f = d.flatten(idx);
      const double v = objective(f);
      if (v > best) best = v, next = f;
    }
    if (next == cur) return cur;
    cur = next;
  }
}

double refine(const BoxDomain& d, std::span<const double> u, const CubicInterpolator& interp, const Point& y,
              std::size_t node) {
  const int n = d.n;
  const double h = d.spacing();
  const Point x0 = d.coordinate(node);
  const double discrete = dot(x0, y, n) - u[node];

  Point x = x0;
  bool converged = false;
  for (int it = 0; it < 30 && !converged; ++it) {
    const LocalJet j = interp.jet(x);
    if (!j.hessian.positive_definite()) break;
    Point r{};
    for (int k = 0; k < n; ++k) r[k] = j.gradient[k] - y[k];
    const Point dx = j.hessian.inverse().apply(r);
    bool escaped = false;
    double step = 0.0;
    for (int k = 0; k < n; ++k) {
      x[k] -= dx[k];
      step = std::max(step, std::abs(dx[k]));
      if (std::abs(x[k] - x0[k]) > 2.0 * h) escaped = true;
    }
    if (escaped) break;
    converged = step <= 1e-9 * h;
  }
  if (converged) {
    const double v = dot(x, y, n) - interp.value(x);
    if (v >= discrete - 1e-12 * (1.0 + std::abs(discrete))) return std::max(v, discrete);
  }

  // Separable three-point parabola around the node.
  const Index c = d.unflatten(node);
  double v = discrete;
  for (int k = 0; k < n; ++k) {
    const std::size_t s = d.stride(k);
    if (c[k] == 0 || c[k] == d.points_per_axis - 1) continue;
    auto f = [&](std::size_t g) { return dot(d.coordinate(g), y, n) - u[g]; };
    const double fm = f(node - s), fp = f(node + s);
    const double curv = fp - 2.0 * discrete + fm;
    if (curv < 0.0) v -= (fp - fm) * (fp - fm) / (8.0 * curv);
  }
  return v;
}

}  // namespace

BoxDomain auto_dual_domain(const GridFunction& u, int points_per_axis, double fraction) {
  const BoxDomain& d = u.domain();
  double reach = std::numeric_limits<double>::infinity();
  for_each_node(d, 1, [&](std::size_t, const Index& idx) {
    if (d.within(idx, 2)) return;
    const Point g = gradient_at(u, idx);
    double norm = 0.0;
    for (int k = 0; k < d.n; ++k) norm = std::max(norm, std::abs(g[k]));
    reach = std::min(reach, norm);
  });
  if (!(reach > 0.0) || !std::isfinite(reach))
    throw RangeError("gradient image does not contain a box around the origin");
  BoxDomain y{d.n, fraction * reach, points_per_axis > 0 ? points_per_axis : d.points_per_axis, d.interior_margin};
  y.validate();
  return y;
}

GridFunction legendre_transform(const GridFunction& u, const BoxDomain& y_grid) {
  const BoxDomain& d = u.domain();
  if (y_grid.n != d.n) throw DomainError("primal and dual grids differ in dimension");
  y_grid.validate();
  const auto vals = u.values();
  const CubicInterpolator interp(u);
  std::vector<double> out(y_grid.node_count());
  std::size_t warm = d.node_count() / 2;
  for (std::size_t f = 0; f < out.size(); ++f) {
    const Point y = y_grid.coordinate(f);
    const std::size_t node = ascend(d, vals, y, warm);
    if (d.on_boundary(d.unflatten(node)))
      throw RangeError("dual point outside the sampled gradient range (maximiser on the boundary layer)");
    out[f] = refine(d, vals, interp, y, node);
    warm = node;
  }
  return GridFunction(y_grid, std::move(out), u.label().empty() ? "u*" : u.label() + "*");
}

double duality_involution_check(const GridFunction& u, std::optional<BoxDomain> y_grid) {
  const BoxDomain& d = u.domain();
  const BoxDomain yd = y_grid.value_or(auto_dual_domain(u));
  const GridFunction us = legendre_transform(u, yd);
  const CubicInterpolator dual(us);
  const double reach = yd.half_width - (1 + yd.interior_margin) * yd.spacing();
  double worst = 0.0;
  bool any = false;
  for_each_node(d, 1 + d.interior_margin, [&](std::size_t, const Index& idx) {
    const Point y = gradient_at(u, idx);
    for (int k = 0; k < d.n; ++k)
      if (std::abs(y[k]) > reach) return;
    any = true;
    const auto P = multiply(dual.jet(y).hessian, hessian_at(u, idx));
    double fro = 0.0;
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j) {
        const double e = P[i * kMaxDim + j] - (i == j ? 1.0 : 0.0);
        fro += e * e;
      }
    worst = std::max(worst, std::sqrt(fro));
  });
  if (!any) throw RangeError("no monitored node maps into the dual grid");
  return worst;
}

DualFlowReport dual_flow_check(const std::vector<Snapshot>& trajectory, std::optional<BoxDomain> y_grid,
                               double swap_constant) {
  if (trajectory.size() < 3) throw InsufficientSamples("dual_flow_check needs at least three snapshots");
  DualFlowReport rep;
  if (y_grid) {
    rep.y_grid = *y_grid;
  } else {
    rep.y_grid = auto_dual_domain(trajectory.front().u);
    for (const Snapshot& s : trajectory)
      rep.y_grid.half_width = std::min(rep.y_grid.half_width, auto_dual_domain(s.u).half_width);
  }
  const BoxDomain& yd = rep.y_grid;
  const int n = yd.n;

  std::vector<GridFunction> dual;
  for (const Snapshot& s : trajectory) {
    dual.push_back(legendre_transform(s.u, yd));
    EigenSwapRecord sw;
    sw.t = s.t;
    sw.primal = hessian(s.u).bounds;
    sw.dual = hessian(dual.back()).bounds;
    sw.slack = swap_constant * std::max(s.u.domain().spacing(), yd.spacing());
    sw.holds = sw.dual.lambda_min >= 1.0 / sw.primal.lambda_max - sw.slack &&
               sw.dual.lambda_max <= 1.0 / sw.primal.lambda_min + sw.slack;
    rep.eigen_swap_holds = rep.eigen_swap_holds && sw.holds;
    rep.swaps.push_back(sw);
  }

  for (std::size_t k = 1; k + 1 < trajectory.size(); ++k) {
    const double h1 = trajectory[k].t - trajectory[k - 1].t;
    const double h2 = trajectory[k + 1].t - trajectory[k].t;
    if (!(h1 > 0.0 && h2 > 0.0)) throw DomainError("snapshot times must increase");
    const double w0 = -h2 / (h1 * (h1 + h2));
    const double w1 = (h2 - h1) / (h1 * h2);
    const double w2 = h1 / (h2 * (h1 + h2));
    double worst = 0.0;
    for_each_node(yd, 1 + yd.interior_margin, [&](std::size_t f, const Index& idx) {
      const SymMat H = hessian_at(dual[k], idx);
      const double det = H.determinant();
      if (!(det > 0.0)) throw NonConvexityError("conjugate lost convexity", f);
      const double dt = w0 * dual[k - 1][f] + w1 * dual[k][f] + w2 * dual[k + 1][f];
      worst = std::max(worst, std::abs(dt - std::log(det) / n));
    });
    rep.times.push_back(trajectory[k].t);
    rep.residual_per_time.push_back(worst);
    rep.residual = std::max(rep.residual, worst);
  }
  return rep;
}

}  // namespace logflow
