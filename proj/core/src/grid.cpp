#include "logflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "logflow/errors.hpp"

namespace logflow {

void BoxDomain::validate() const {
  if (n < 1 || n > kMaxDim) throw DomainError("dimension n must be 1, 2 or 3, got " + std::to_string(n));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw DomainError("half_width L must be positive and finite");
  if (points_per_axis < 5)
    throw DomainError("points_per_axis m must be at least 5, got " + std::to_string(points_per_axis));
  if (interior_margin < 0) throw DomainError("interior_margin must be non-negative");
  if (2 * (1 + interior_margin) > points_per_axis - 1)
    throw DomainError("interior_margin leaves no monitored nodes");
}

std::size_t BoxDomain::node_count() const {
  std::size_t c = 1;
  for (int k = 0; k < n; ++k) c *= static_cast<std::size_t>(points_per_axis);
  return c;
}

std::size_t BoxDomain::stride(int axis) const {
  std::size_t s = 1;
  for (int k = axis + 1; k < n; ++k) s *= static_cast<std::size_t>(points_per_axis);
  return s;
}

Index BoxDomain::unflatten(std::size_t flat) const {
  Index idx{0, 0, 0};
  for (int k = n - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(flat % points_per_axis);
    flat /= points_per_axis;
  }
  return idx;
}

std::size_t BoxDomain::flatten(const Index& idx) const {
  std::size_t flat = 0;
  for (int k = 0; k < n; ++k) flat = flat * points_per_axis + static_cast<std::size_t>(idx[k]);
  return flat;
}

Point BoxDomain::coordinate(const Index& idx) const {
  Point x{};
  const double h = spacing();
  for (int k = 0; k < n; ++k) x[k] = -half_width + idx[k] * h;
  return x;
}

bool BoxDomain::on_boundary(const Index& idx) const {
  for (int k = 0; k < n; ++k)
    if (idx[k] == 0 || idx[k] == points_per_axis - 1) return true;
  return false;
}

bool BoxDomain::within(const Index& idx, int lo) const {
  for (int k = 0; k < n; ++k)
    if (idx[k] < lo || idx[k] > points_per_axis - 1 - lo) return false;
  return true;
}

GridFunction::GridFunction(BoxDomain domain, std::vector<double> values, std::string label)
    : domain_(domain), values_(std::move(values)), label_(std::move(label)) {
  domain_.validate();
  if (values_.size() != domain_.node_count())
    throw DomainError("grid function has " + std::to_string(values_.size()) + " values, expected " +
                      std::to_string(domain_.node_count()));
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw DomainError("non-finite value at node " + std::to_string(i) +
                        (label_.empty() ? std::string{} : " of '" + label_ + "'"));
}

GridFunction GridFunction::sample(const BoxDomain& domain, const std::function<double(const Point&)>& fn,
                                  std::string label) {
  domain.validate();
  std::vector<double> v(domain.node_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(domain.coordinate(i));
  return GridFunction(domain, std::move(v), std::move(label));
}

GridFunction GridFunction::relabeled(std::string label) const {
  GridFunction g = *this;
  g.label_ = std::move(label);
  return g;
}

double GridFunction::interior_sup_distance(const GridFunction& other) const {
  if (!(domain_ == other.domain_)) throw DomainError("interior_sup_distance: domains differ");
  double e = 0.0;
  for_each_node(domain_, 1 + domain_.interior_margin,
                [&](std::size_t f, const Index&) { e = std::max(e, std::abs(values_[f] - other.values_[f])); });
  return e;
}

Stencil first_difference(int p, int m) {
  if (p == 0) return {3, {0, 1, 2, 0}, {-1.5, 2.0, -0.5, 0.0}};
  if (p == m - 1) return {3, {0, -1, -2, 0}, {1.5, -2.0, 0.5, 0.0}};
  return {2, {-1, 1, 0, 0}, {-0.5, 0.5, 0.0, 0.0}};
}

Stencil second_difference(int p, int m) {
  if (p == 0) {
    if (m >= 4) return {4, {0, 1, 2, 3}, {2.0, -5.0, 4.0, -1.0}};
    return {3, {0, 1, 2, 0}, {1.0, -2.0, 1.0, 0.0}};
  }
  if (p == m - 1) {
    if (m >= 4) return {4, {0, -1, -2, -3}, {2.0, -5.0, 4.0, -1.0}};
    return {3, {0, -1, -2, 0}, {1.0, -2.0, 1.0, 0.0}};
  }
  return {3, {-1, 0, 1, 0}, {1.0, -2.0, 1.0, 0.0}};
}

Point gradient_at(const GridFunction& u, const Index& idx) {
  const BoxDomain& d = u.domain();
  const double inv_h = 1.0 / d.spacing();
  const auto vals = u.values();
  const std::size_t base = d.flatten(idx);
  Point g{};
  for (int k = 0; k < d.n; ++k) {
    const Stencil s = first_difference(idx[k], d.points_per_axis);
    const auto stride = static_cast<std::ptrdiff_t>(d.stride(k));
    double acc = 0.0;
    for (int q = 0; q < s.count; ++q) acc += s.weight[q] * vals[base + s.offset[q] * stride];
    g[k] = acc * inv_h;
  }
  return g;
}

SymMat hessian_at(const GridFunction& u, const Index& idx) {
  const BoxDomain& d = u.domain();
  const double h = d.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const int m = d.points_per_axis;
  const auto vals = u.values();
  const std::size_t base = d.flatten(idx);
  SymMat H(d.n);
  for (int i = 0; i < d.n; ++i) {
    const Stencil s = second_difference(idx[i], m);
    const auto si = static_cast<std::ptrdiff_t>(d.stride(i));
    double acc = 0.0;
    for (int q = 0; q < s.count; ++q) acc += s.weight[q] * vals[base + s.offset[q] * si];
    H(i, i) = acc * inv_h2;
    for (int j = i + 1; j < d.n; ++j) {
      // Iterated first differences; computed once and mirrored, so the
      // matrix is symmetric bit for bit.
      const Stencil a = first_difference(idx[i], m);
      const Stencil b = first_difference(idx[j], m);
      const auto sj = static_cast<std::ptrdiff_t>(d.stride(j));
      double mixed = 0.0;
      for (int p = 0; p < a.count; ++p)
        for (int q = 0; q < b.count; ++q)
          mixed += a.weight[p] * b.weight[q] * vals[base + a.offset[p] * si + b.offset[q] * sj];
      H.set(i, j, mixed * inv_h2);
    }
  }
  return H;
}

VectorField gradient(const GridFunction& u) {
  const BoxDomain& d = u.domain();
  VectorField g{d, std::vector<Point>(d.node_count())};
  for_each_node(d, 0, [&](std::size_t f, const Index& idx) { g.values[f] = gradient_at(u, idx); });
  return g;
}

HessianField hessian(const GridFunction& u) {
  const BoxDomain& d = u.domain();
  HessianField hf{d, std::vector<SymMat>(d.node_count()), std::vector<EigenBounds>(d.node_count()), {}};
  for_each_node(d, 0, [&](std::size_t f, const Index& idx) {
    hf.matrices[f] = hessian_at(u, idx);
    hf.node_bounds[f] = eigen_bounds(hf.matrices[f]);
  });
  hf.bounds = hessian_eigen_bounds(hf);
  return hf;
}

EigenBounds hessian_eigen_bounds(const HessianField& h) {
  EigenBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for_each_node(h.domain, 1 + h.domain.interior_margin, [&](std::size_t f, const Index&) {
    b.lambda_min = std::min(b.lambda_min, h.node_bounds[f].lambda_min);
    b.lambda_max = std::max(b.lambda_max, h.node_bounds[f].lambda_max);
  });
  return b;
}

double derivative_sup_norm(const GridFunction& u, int order) {
  if (order < 2 || order > 4) throw DomainError("derivative_sup_norm supports orders 2, 3 and 4");
  const BoxDomain& d = u.domain();
  const HessianField hf = hessian(u);
  const double h = d.spacing();
  const int n = d.n;
  const int lo = std::max(2, 1 + d.interior_margin);
  double sup = 0.0;
  for_each_node(d, lo, [&](std::size_t f, const Index&) {
    double sum = 0.0;
    if (order == 2) {
      for (double v : hf.matrices[f].a) sum += v * v;
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            const std::size_t sk = d.stride(k);
            if (order == 3) {
              const double t = (hf.matrices[f + sk](i, j) - hf.matrices[f - sk](i, j)) / (2.0 * h);
              sum += t * t;
              continue;
            }
            for (int l = 0; l < n; ++l) {
              double q;
              if (k == l) {
                q = (hf.matrices[f + sk](i, j) - 2.0 * hf.matrices[f](i, j) + hf.matrices[f - sk](i, j)) / (h * h);
              } else {
                const std::size_t sl = d.stride(l);
                q = (hf.matrices[f + sk + sl](i, j) - hf.matrices[f + sk - sl](i, j) -
                     hf.matrices[f - sk + sl](i, j) + hf.matrices[f - sk - sl](i, j)) /
                    (4.0 * h * h);
              }
              sum += q * q;
            }
          }
        }
    }
    sup = std::max(sup, std::sqrt(sum));
  });
  return sup;
}

double third_derivative_norm(const GridFunction& u) { return derivative_sup_norm(u, 3); }

GridFunction log_det_hessian(const GridFunction& u, const std::function<double(std::size_t)>& boundary_fill) {
  const BoxDomain& d = u.domain();
  std::vector<double> out(d.node_count(), 0.0);
  for_each_node(d, 1, [&](std::size_t f, const Index& idx) {
    const SymMat H = hessian_at(u, idx);
    const double det = H.determinant();
    if (!(det > 0.0) || !H.positive_definite())
      throw NonConvexityError("D^2u is not positive definite at node " + std::to_string(f), f);
    out[f] = std::log(det) / d.n;
  });
  const int m = d.points_per_axis;
  for_each_node(d, 0, [&](std::size_t f, const Index& idx) {
    if (!d.on_boundary(idx)) return;
    if (boundary_fill) {
      out[f] = boundary_fill(f);
      return;
    }
    Index nearest = idx;
    for (int k = 0; k < d.n; ++k) nearest[k] = std::clamp(idx[k], 1, m - 2);
    out[f] = out[d.flatten(nearest)];
  });
  return GridFunction(d, std::move(out), "logdet");
}

}  // namespace logflow
