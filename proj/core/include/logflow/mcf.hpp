#pragma once

#include <array>
#include <vector>

#include "logflow/grid.hpp"
#include "logflow/snapshot.hpp"

namespace logflow {

/// Vector of R^2n in null coordinates (x, y); the metric is
/// ds^2 = (1/2) sum dx^i dy^i.
struct NullVector {
  Point x{};
  Point y{};
};

/// <v, w> = (v_x . w_y + v_y . w_x) / 2.
double null_pairing(const NullVector& v, const NullVector& w, int n);

/// Orthonormal signature-(n, n) coordinates: space = (x + y)/2,
/// time = (x - y)/2, so that <v, v> = |space|^2 - |time|^2 and the bilinear
/// form becomes space.space' - time.time'.
struct SignatureVector {
  Point space{};
  Point time{};
};

SignatureVector to_signature_coordinates(const NullVector& v, int n);
double signature_pairing(const SignatureVector& v, const SignatureVector& w, int n);

/// Largest absolute component.
double max_component(const NullVector& v, int n);

/// Geometry of the gradient graph x -> (x, Du(x)) at one node.
struct ImmersionFrame {
  Point base{};
  NullVector F;
  /// e_i = d/dx^i + u_ij d/dy^j
  std::array<NullVector, kMaxDim> e;
  /// eta_i = d/dx^i - u_ij d/dy^j
  std::array<NullVector, kMaxDim> eta;
  SymMat metric;
  double g = 0.0;
  Point grad_g{};
  /// H = -(1/2ng) d_l g g^lk eta_k
  NullVector H;
};

/// Needs the node at least two layers inside (dg uses neighbouring
/// Hessians). Throws NonConvexityError and DomainError.
ImmersionFrame immersion_frame(const GridFunction& u, const Index& at);
NullVector mean_curvature(const GridFunction& u, const Index& at);

/// Mean curvature vector at every node at least max(2, 1 + margin) layers
/// inside; other entries are zero. The x part is the particle velocity.
struct CurvatureField {
  BoxDomain domain;
  int lo = 2;
  std::vector<NullVector> H;

  /// Multilinear interpolation; throws EscapeError outside the valid block.
  NullVector at(const Point& x) const;
};

CurvatureField curvature_field(const GridFunction& u);

struct ParticlePath {
  Point seed{};
  std::vector<double> t;
  std::vector<Point> r;
  /// F(x0, t) = (r_t, Du(r_t, t))
  std::vector<NullVector> F;
};

/// Integrates dx/dt = -(1/2ng) g^li d_l g through the snapshot sequence with
/// the explicit midpoint rule, one step per snapshot interval; the velocity
/// is interpolated multilinearly in space and linearly in time.
std::vector<ParticlePath> integrate_particles(const std::vector<Snapshot>& trajectory, const std::vector<Point>& seeds);

struct McfReport {
  /// max over paths and interior sample times of |dF/dt - H| (largest null
  /// component).
  double max_deviation = 0.0;
  /// Tangential and normal parts of dF/dt, same norm.
  double max_tangential = 0.0;
  double max_normal = 0.0;
  double max_curvature = 0.0;
  std::size_t samples = 0;
  double threshold = 0.0;
  /// Deviation above the threshold.
  bool flagged = false;
};

/// Compares the three-point time derivative of F along each path with the
/// mean curvature vector at r(x0, t).
McfReport verify_mcf(const std::vector<ParticlePath>& paths, const std::vector<Snapshot>& trajectory,
                     double threshold = 5e-3);

}  // namespace logflow
