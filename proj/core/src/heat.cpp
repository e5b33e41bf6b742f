#include "logflow/heat.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace logflow {

double heat_tail_mass(int n, double half_width, double t) {
  const double inside = std::erf(half_width / std::sqrt(4.0 * t));
  return 1.0 - std::pow(inside, n);
}

GridFunction heat_solve(const GridFunction& u0, double t, const QuadraticFarField& far_field,
                        const HeatOptions& options) {
  if (!(t > 0.0)) throw DomainError("heat_solve needs t > 0");
  const BoxDomain& d = u0.domain();
  if (far_field.A.n != d.n) throw DomainError("far field dimension differs from the grid");
  const double tail = heat_tail_mass(d.n, d.half_width, t);
  if (tail > options.tail_tolerance)
    throw TailError("Gaussian mass outside the box is " + std::to_string(tail) + " at t = " + std::to_string(t));

  const int m = d.points_per_axis;
  const double h = d.spacing();
  // One-dimensional kernel matrix with trapezoid weights in the source index.
  std::vector<double> K(static_cast<std::size_t>(m) * m);
  const double norm = h / std::sqrt(4.0 * std::numbers::pi * t);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double r = (i - j) * h;
      const double w = (j == 0 || j == m - 1) ? 0.5 : 1.0;
      K[static_cast<std::size_t>(i) * m + j] = w * norm * std::exp(-r * r / (4.0 * t));
    }

  std::vector<double> v(u0.size());
  for (std::size_t f = 0; f < v.size(); ++f) v[f] = u0[f] - far_field.value(d.coordinate(f), 0.0, 0.0);

  // Apply K along each axis in turn.
  std::vector<double> tmp(v.size());
  for (int axis = 0; axis < d.n; ++axis) {
    const std::size_t s = d.stride(axis);
    for (std::size_t f = 0; f < v.size(); ++f) {
      const Index idx = d.unflatten(f);
      const std::size_t base = f - static_cast<std::size_t>(idx[axis]) * s;
      const double* row = &K[static_cast<std::size_t>(idx[axis]) * m];
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += row[j] * v[base + j * s];
      tmp[f] = acc;
    }
    v.swap(tmp);
  }

  for (std::size_t f = 0; f < v.size(); ++f) v[f] += far_field.value(d.coordinate(f), t, 0.0);
  return GridFunction(d, std::move(v), u0.label());
}

}  // namespace logflow
