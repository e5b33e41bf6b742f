#pragma once

#include "logflow/flow.hpp"
#include "logflow/grid.hpp"

namespace logflow {

struct HeatOptions {
  /// Largest admissible Gaussian mass outside the box, measured at the
  /// centre; beyond it the truncated convolution is rejected.
  double tail_tolerance = 1e-10;
};

/// Gaussian convolution of u0 at time t > 0.
///
/// The far-field quadratic q is convolved in closed form (q + t tr A); the
/// remainder u0 - q is convolved numerically with tensor-product trapezoid
/// weights over the grid nodes. Throws TailError when the kernel spills out
/// of the box by more than the tail tolerance and DomainError for t <= 0.
GridFunction heat_solve(const GridFunction& u0, double t, const QuadraticFarField& far_field,
                        const HeatOptions& options = {});

/// Gaussian mass outside [-L, L]^n for a kernel centred at the origin.
double heat_tail_mass(int n, double half_width, double t);

}  // namespace logflow
