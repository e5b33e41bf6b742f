#pragma once

#include <optional>
#include <vector>

#include "logflow/grid.hpp"
#include "logflow/snapshot.hpp"

namespace logflow {

/// Symmetric y-box covering `fraction` of the largest centred cube inside
/// the gradient image of u (read off the outermost interior layer).
/// points_per_axis = 0 keeps the node count of u.
BoxDomain auto_dual_domain(const GridFunction& u, int points_per_axis = 0, double fraction = 0.8);

/// u*(y) = max_x <x, y> - u(x). The discrete maximiser is found by ascent
/// over neighbouring nodes, warm-started from the previous y node, and then
/// refined by Newton on the cubic interpolant of u (a three-point parabola
/// per axis if Newton leaves the cell). Throws RangeError when the maximiser
/// sits on the boundary layer, i.e. y is outside the sampled gradient range.
GridFunction legendre_transform(const GridFunction& u, const BoxDomain& y_grid);

/// max over monitored x with Du(x) inside the dual grid of the Frobenius
/// norm of D^2u*(Du(x)) D^2u(x) - I.
double duality_involution_check(const GridFunction& u, std::optional<BoxDomain> y_grid = {});

struct EigenSwapRecord {
  double t = 0.0;
  EigenBounds primal;
  EigenBounds dual;
  double slack = 0.0;
  bool holds = false;
};

struct DualFlowReport {
  /// Sup over interior snapshots and monitored y nodes of
  /// d/dt u* - (1/n) ln det D^2 u*.
  double residual = 0.0;
  std::vector<double> times;
  std::vector<double> residual_per_time;
  std::vector<EigenSwapRecord> swaps;
  bool eigen_swap_holds = true;
  BoxDomain y_grid;
};

/// Conjugates every snapshot of a tau = 1 trajectory on a common y-grid and
/// measures how well the conjugates solve the same flow. The time derivative
/// is the three-point formula on (possibly uneven) snapshot times. The
/// eigenvalue swap 1/lambda_max(D^2u) <= D^2u* <= 1/lambda_min(D^2u) is
/// checked with slack swap_constant * h.
DualFlowReport dual_flow_check(const std::vector<Snapshot>& trajectory, std::optional<BoxDomain> y_grid = {},
                               double swap_constant = 1.0);

}  // namespace logflow
