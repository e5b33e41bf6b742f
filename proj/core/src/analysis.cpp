#include "logflow/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "logflow/interpolation.hpp"

namespace logflow {

std::vector<CoincidentPair> coincident_nodes(const BoxDomain& d, double R) {
  if (!(R > 0.0)) throw DomainError("scale factor must be positive");
  const int m = d.points_per_axis;
  const double mid = 0.5 * (m - 1);
  std::vector<CoincidentPair> out;
  for_each_node(d, 0, [&](std::size_t f, const Index& idx) {
    Index target{0, 0, 0};
    for (int k = 0; k < d.n; ++k) {
      const double j = R * (idx[k] - mid) + mid;
      const double r = std::round(j);
      if (std::abs(j - r) > 1e-9 || r < 0 || r > m - 1) return;
      target[k] = static_cast<int>(r);
    }
    out.push_back({f, d.flatten(target)});
  });
  return out;
}

double check_condition_A(const GridFunction& u, std::span<const double> scales) {
  double defect = 0.0;
  bool any = false;
  for (double R : scales)
    for (const auto& p : coincident_nodes(u.domain(), R)) {
      any = true;
      defect = std::max(defect, std::abs(u[p.node] - u[p.scaled] / (R * R)));
    }
  if (!any) throw EmptyCoincidenceError("no grid node x has R x on the grid for the given scales");
  return defect;
}

ConditionBReport check_condition_B(const GridFunction& u, double lambda, double Lambda, double c_h2) {
  if (lambda > Lambda) throw DomainError("Condition B needs lambda <= Lambda");
  ConditionBReport rep;
  rep.lambda = lambda;
  rep.Lambda = Lambda;
  const double h = u.domain().spacing();
  rep.tolerance = 1e-8 + c_h2 * h * h;
  rep.bounds = hessian(u).bounds;
  rep.pass = lambda - rep.tolerance <= rep.bounds.lambda_min && rep.bounds.lambda_max <= Lambda + rep.tolerance;
  return rep;
}

RescaledView rescale(const std::vector<Snapshot>& trajectory, double R, std::optional<BoxDomain> coarse) {
  if (!(R > 0.0)) throw DomainError("scale factor must be positive");
  RescaledView view;
  view.R = R;
  for (const Snapshot& s : trajectory) {
    const BoxDomain& src = s.u.domain();
    BoxDomain dst = coarse.value_or(BoxDomain{src.n, src.half_width / R, src.points_per_axis, src.interior_margin});
    if (R * dst.half_width > src.half_width * (1.0 + 1e-12))
      throw WindowEscape("rescaled window R L = " + std::to_string(R * dst.half_width) +
                         " exceeds the source box " + std::to_string(src.half_width));
    const CubicInterpolator interp(s.u);
    GridFunction v = GridFunction::sample(
        dst,
        [&](const Point& x) {
          Point y{};
          for (int k = 0; k < dst.n; ++k) y[k] = std::clamp(R * x[k], -src.half_width, src.half_width);
          return interp.value(y) / (R * R);
        },
        s.u.label());
    view.snapshots.push_back({std::move(v), s.t / (R * R), s.tau});
  }
  return view;
}

RateFit fit_decay(std::string quantity, std::span<const double> t, std::span<const double> q, double eps0,
                  std::size_t min_samples) {
  if (t.size() != q.size()) throw DomainError("fit_decay: sample arrays differ in length");
  RateFit fit;
  fit.quantity = std::move(quantity);
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t[k] >= eps0 && t[k] > 0.0) {
      fit.t.push_back(t[k]);
      fit.q.push_back(q[k]);
    }
  if (fit.t.size() < min_samples)
    throw InsufficientSamples(fit.quantity + ": " + std::to_string(fit.t.size()) + " samples with t >= " +
                              std::to_string(eps0) + ", need " + std::to_string(min_samples));
  if (std::all_of(fit.q.begin(), fit.q.end(), [](double v) { return v == 0.0; })) {
    fit.identically_zero = true;
    return fit;
  }
  if (std::any_of(fit.q.begin(), fit.q.end(), [](double v) { return !(v > 0.0); }))
    throw DomainError(fit.quantity + ": log-log fit needs positive samples");
  const std::size_t N = fit.t.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < N; ++k) {
    const double x = std::log(fit.t[k]), y = std::log(fit.q[k]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double denom = N * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw InsufficientSamples(fit.quantity + ": sample times are not distinct");
  fit.exponent = (N * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / N;
  fit.constant = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const double r = std::log(fit.q[k]) - intercept - fit.exponent * std::log(fit.t[k]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / N);
  return fit;
}

std::vector<double> derivative_norm_series(const std::vector<Snapshot>& trajectory, int order) {
  std::vector<double> q;
  for (const Snapshot& s : trajectory) {
    const double v = derivative_sup_norm(s.u, order);
    q.push_back(v * v);
  }
  return q;
}

RateFit fit_decay(const std::vector<Snapshot>& trajectory, int order, double eps0) {
  std::vector<double> t;
  for (const Snapshot& s : trajectory) t.push_back(s.t);
  const std::vector<double> q = derivative_norm_series(trajectory, order);
  return fit_decay("D" + std::to_string(order) + "norm2", t, q, eps0);
}

BlowdownReport blowdown_convergence(const std::vector<Snapshot>& trajectory,
                                    const std::function<double(const Point&)>& U1, const BoxDomain& window,
                                    double tolerance, std::size_t decreasing_from) {
  BlowdownReport rep;
  rep.tolerance = tolerance;
  for (const Snapshot& s : trajectory) {
    if (!(s.t > 0.0)) continue;
    const BoxDomain& d = s.u.domain();
    const double root = std::sqrt(s.t);
    const double usable = d.half_width - (1 + d.interior_margin) * d.spacing();
    if (root * window.half_width > usable + 1e-12)
      throw WindowEscape("sqrt(t) * window = " + std::to_string(root * window.half_width) + " at t = " +
                         std::to_string(s.t) + " leaves the monitored box of half-width " + std::to_string(usable));
    const CubicInterpolator interp(s.u);
    double e = 0.0;
    for_each_node(window, 0, [&](std::size_t, const Index& idx) {
      const Point x = window.coordinate(idx);
      Point y{};
      for (int k = 0; k < d.n; ++k) y[k] = root * x[k];
      e = std::max(e, std::abs(interp.value(y) / s.t - U1(x)));
    });
    rep.t.push_back(s.t);
    rep.error.push_back(e);
  }
  if (rep.error.empty()) throw InsufficientSamples("blow-down needs snapshots with t > 0");
  rep.decreasing = true;
  for (std::size_t k = std::max<std::size_t>(decreasing_from, 1); k < rep.error.size(); ++k)
    if (!(rep.error[k] < rep.error[k - 1])) rep.decreasing = false;
  rep.final_error = rep.error.back();
  rep.pass = rep.decreasing && rep.final_error <= tolerance;
  try {
    rep.fit = fit_decay("blowdown_error", rep.t, rep.error, 0.0, 3);
  } catch (const Error&) {
    // Too few or non-positive samples: no rate, the verdict above stands.
  }
  return rep;
}

PlaneReport plane_convergence(const std::vector<Snapshot>& trajectory, double window_half_width, double tolerance,
                              double t_from) {
  PlaneReport rep;
  rep.tolerance = tolerance;
  if (trajectory.empty()) throw InsufficientSamples("plane convergence needs at least one snapshot");

  const BoxDomain& d0 = trajectory.front().u.domain();
  const int n = d0.n;
  {
    const GridFunction& u0 = trajectory.front().u;
    Point gmin, gmax;
    gmin.fill(std::numeric_limits<double>::infinity());
    gmax.fill(-std::numeric_limits<double>::infinity());
    double scale = 0.0;
    for_each_node(d0, 1, [&](std::size_t, const Index& idx) {
      if (d0.within(idx, 2)) return;
      const Point g = gradient_at(u0, idx);
      for (int k = 0; k < n; ++k) {
        gmin[k] = std::min(gmin[k], g[k]);
        gmax[k] = std::max(gmax[k], g[k]);
        scale = std::max(scale, std::abs(g[k]));
      }
    });
    double osc = 0.0;
    for (int k = 0; k < n; ++k) osc = std::max(osc, gmax[k] - gmin[k]);
    if (osc > 1e-6 * (1.0 + scale)) {
      rep.note = "hypothesis violated: Du varies by " + std::to_string(osc) +
                 " along the outer layer, so the data is not a compact perturbation of a linear function";
      return rep;
    }
  }
  rep.hypothesis_ok = true;
  rep.note = "compact perturbation of a linear function";

  for (const Snapshot& s : trajectory) {
    const BoxDomain& d = s.u.domain();
    std::vector<Point> xs, gs;
    for_each_node(d, 1 + d.interior_margin, [&](std::size_t, const Index& idx) {
      const Point x = d.coordinate(idx);
      for (int k = 0; k < n; ++k)
        if (std::abs(x[k]) > window_half_width + 1e-12) return;
      xs.push_back(x);
      gs.push_back(gradient_at(s.u, idx));
    });
    if (xs.empty()) throw DomainError("plane convergence window contains no monitored node");
    Eigen::MatrixXd X(xs.size(), n + 1);
    Eigen::MatrixXd G(xs.size(), n);
    double gsup = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      X(i, 0) = 1.0;
      for (int k = 0; k < n; ++k) {
        X(i, k + 1) = xs[i][k];
        G(i, k) = gs[i][k];
      }
      gsup = std::max(gsup, std::sqrt(dot(gs[i], gs[i], n)));
    }
    const Eigen::MatrixXd coef = X.colPivHouseholderQr().solve(G);
    const Eigen::MatrixXd resid = G - X * coef;
    double dev = 0.0;
    for (Eigen::Index i = 0; i < resid.rows(); ++i) dev = std::max(dev, resid.row(i).norm());
    rep.t.push_back(s.t);
    rep.affine_deviation.push_back(dev);
    rep.max_gradient.push_back(gsup);
  }

  bool monotone = true;
  for (std::size_t k = 1; k < rep.t.size(); ++k) {
    if (rep.t[k - 1] < t_from) continue;
    if (rep.affine_deviation[k] > rep.affine_deviation[k - 1] || rep.max_gradient[k] > rep.max_gradient[k - 1])
      monotone = false;
  }
  rep.pass = monotone && rep.affine_deviation.back() <= tolerance && rep.max_gradient.back() <= tolerance;
  return rep;
}

}  // namespace logflow
