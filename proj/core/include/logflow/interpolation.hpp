#pragma once

#include <span>
#include <vector>

#include "logflow/grid.hpp"

namespace logflow {

struct LocalJet {
  double value = 0.0;
  Point gradient{};
  SymMat hessian;
};

/// Tensor-product four-point Lagrange interpolation on a uniform grid. Near
/// the box faces the stencil is shifted inward rather than extrapolated.
class CubicInterpolator {
 public:
  CubicInterpolator(const BoxDomain& domain, std::vector<double> values);
  explicit CubicInterpolator(const GridFunction& u);

  const BoxDomain& domain() const { return domain_; }
  bool contains(const Point& x) const;
  double value(const Point& x) const;
  /// Value, gradient and Hessian of the local cubic.
  LocalJet jet(const Point& x) const;

 private:
  BoxDomain domain_;
  std::vector<double> values_;
};

/// Bilinear / trilinear interpolation (linear for n = 1).
double multilinear(const BoxDomain& domain, std::span<const double> values, const Point& x);

}  // namespace logflow
