#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "logflow/errors.hpp"
#include "logflow/symmat.hpp"

namespace logflow {

using Index = std::array<int, kMaxDim>;

/// Uniform grid on the box [-L, L]^n with m points per axis.
///
/// Nodes are stored row-major: the last axis varies fastest. The "monitored
/// interior" excludes the outer boundary layer plus `interior_margin` further
/// layers; every norm reported by the library is taken over it.
struct BoxDomain {
  int n = 1;
  double half_width = 1.0;
  int points_per_axis = 5;
  int interior_margin = 0;

  /// Throws DomainError unless 1 <= n <= 3, L > 0, m >= 5 and the margin
  /// leaves at least one monitored node.
  void validate() const;

  double spacing() const { return 2.0 * half_width / (points_per_axis - 1); }
  std::size_t node_count() const;
  std::size_t stride(int axis) const;

  Index unflatten(std::size_t flat) const;
  std::size_t flatten(const Index& idx) const;
  Point coordinate(const Index& idx) const;
  Point coordinate(std::size_t flat) const { return coordinate(unflatten(flat)); }

  bool on_boundary(const Index& idx) const;
  /// All indices within [lo, m-1-lo].
  bool within(const Index& idx, int lo) const;
  bool monitored(const Index& idx) const { return within(idx, 1 + interior_margin); }

  friend bool operator==(const BoxDomain&, const BoxDomain&) = default;
};

/// Calls fn(flat, idx) for every node whose indices all lie in [lo, m-1-lo],
/// in storage order.
template <typename Fn>
void for_each_node(const BoxDomain& d, int lo, Fn&& fn) {
  const int m = d.points_per_axis;
  const int hi = m - 1 - lo;
  if (hi < lo) return;
  Index idx{0, 0, 0};
  const int i0 = lo, i1 = d.n >= 2 ? lo : 0, i2 = d.n >= 3 ? lo : 0;
  const int e1 = d.n >= 2 ? hi : 0, e2 = d.n >= 3 ? hi : 0;
  for (int a = i0; a <= hi; ++a)
    for (int b = i1; b <= e1; ++b)
      for (int c = i2; c <= e2; ++c) {
        idx = {a, b, c};
        std::size_t flat = static_cast<std::size_t>(a);
        if (d.n >= 2) flat = flat * m + b;
        if (d.n >= 3) flat = flat * m + c;
        fn(flat, idx);
      }
}

/// Scalar field sampled at the nodes of a BoxDomain. Values are fixed at
/// construction; arithmetic produces new instances.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(BoxDomain domain, std::vector<double> values, std::string label = {});

  static GridFunction sample(const BoxDomain& domain, const std::function<double(const Point&)>& fn,
                             std::string label = {});

  const BoxDomain& domain() const { return domain_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t flat) const { return values_[flat]; }
  double at(const Index& idx) const { return values_[domain_.flatten(idx)]; }
  const std::string& label() const { return label_; }
  std::size_t size() const { return values_.size(); }

  GridFunction relabeled(std::string label) const;
  /// Sup-norm of the difference over the monitored interior.
  double interior_sup_distance(const GridFunction& other) const;

 private:
  BoxDomain domain_;
  std::vector<double> values_;
  std::string label_;
};

struct VectorField {
  BoxDomain domain;
  std::vector<Point> values;
};

/// Per-node Hessians with eigenvalue extrema. `bounds` covers the monitored
/// interior only.
struct HessianField {
  BoxDomain domain;
  std::vector<SymMat> matrices;
  std::vector<EigenBounds> node_bounds;
  EigenBounds bounds;
};

/// Finite-difference weights along one axis: value = sum_k weight[k] * u[p + offset[k]].
struct Stencil {
  int count = 0;
  std::array<int, 4> offset{};
  std::array<double, 4> weight{};
};

/// First derivative (times h): central in the interior, one-sided second
/// order at the two ends.
Stencil first_difference(int p, int m);
/// Second derivative (times h^2): central in the interior, one-sided at ends.
Stencil second_difference(int p, int m);

Point gradient_at(const GridFunction& u, const Index& idx);
SymMat hessian_at(const GridFunction& u, const Index& idx);

VectorField gradient(const GridFunction& u);
HessianField hessian(const GridFunction& u);

/// Global eigenvalue extrema of D^2u over the monitored interior.
EigenBounds hessian_eigen_bounds(const HessianField& h);

/// Sup over the monitored interior of the Frobenius norm of the order-l
/// derivative tensor, l in {2, 3, 4}, built from central differences of the
/// Hessian entries. Nodes closer than two layers to the boundary are skipped.
double derivative_sup_norm(const GridFunction& u, int order);
double third_derivative_norm(const GridFunction& u);

/// Nodewise (1/n) ln det D^2u on interior nodes. Boundary nodes take the
/// value of `boundary_fill` when given, otherwise of the nearest interior node.
/// Throws NonConvexityError if an interior Hessian is not positive definite.
GridFunction log_det_hessian(const GridFunction& u,
                             const std::function<double(std::size_t)>& boundary_fill = {});

}  // namespace logflow
