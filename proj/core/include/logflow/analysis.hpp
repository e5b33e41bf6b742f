#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logflow/grid.hpp"
#include "logflow/snapshot.hpp"

namespace logflow {

/// A node x together with the node at R x, both on the same grid.
struct CoincidentPair {
  std::size_t node = 0;
  std::size_t scaled = 0;
};

/// Every node whose image under x -> R x is again a node (to 1e-9 in index
/// units). Requires nothing of R beyond R > 0.
std::vector<CoincidentPair> coincident_nodes(const BoxDomain& domain, double R);

/// max over R and coincident nodes of |u(x) - R^-2 u(R x)|. Throws
/// EmptyCoincidenceError when no scale has a coincident node.
double check_condition_A(const GridFunction& u, std::span<const double> scales);

struct ConditionBReport {
  bool pass = false;
  EigenBounds bounds;
  double lambda = 0.0;
  double Lambda = 0.0;
  double tolerance = 0.0;
};

/// Passes iff lambda - tol <= lambda_min* and lambda_max* <= Lambda + tol
/// with tol = 1e-8 + c_h2 h^2.
ConditionBReport check_condition_B(const GridFunction& u, double lambda, double Lambda, double c_h2 = 0.0);

/// u_R(x, t) = R^-2 u(R x, R^2 t), one view snapshot per source snapshot.
struct RescaledView {
  double R = 1.0;
  std::vector<Snapshot> snapshots;
};

/// Samples the rescaled trajectory on `coarse`, by default the grid of
/// half-width L / R with the same node count so that R x is always a source
/// node. Throws WindowEscape when R x leaves the source box.
RescaledView rescale(const std::vector<Snapshot>& trajectory, double R, std::optional<BoxDomain> coarse = {});

/// q ~ C t^p fitted by least squares on (ln t, ln q).
struct RateFit {
  std::string quantity;
  std::vector<double> t;
  std::vector<double> q;
  double exponent = 0.0;
  double constant = 0.0;
  /// Root-mean-square residual of the log-log regression.
  double residual = 0.0;
  bool identically_zero = false;
};

/// Keeps samples with t >= eps0; throws InsufficientSamples below
/// `min_samples`. All-zero samples give identically_zero and no fit.
RateFit fit_decay(std::string quantity, std::span<const double> t, std::span<const double> q, double eps0 = 0.25,
                  std::size_t min_samples = 5);

/// Squared sup-norm of D^l u (l = 2, 3, 4) for each snapshot.
std::vector<double> derivative_norm_series(const std::vector<Snapshot>& trajectory, int order);
RateFit fit_decay(const std::vector<Snapshot>& trajectory, int order, double eps0 = 0.25);

struct BlowdownReport {
  std::vector<double> t;
  std::vector<double> error;
  std::optional<RateFit> fit;
  bool decreasing = false;
  double final_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// e_k = max over the window nodes of |t_k^-1 u(sqrt(t_k) x, t_k) - U1(x)| for
/// every snapshot with t_k > 0, interpolating u with cubics. Passes when e_k
/// strictly decreases from index `decreasing_from` on and the last error is
/// within `tolerance`. Throws WindowEscape when sqrt(t) * window leaves the
/// monitored part of the box.
BlowdownReport blowdown_convergence(const std::vector<Snapshot>& trajectory,
                                    const std::function<double(const Point&)>& U1, const BoxDomain& window,
                                    double tolerance = 0.02, std::size_t decreasing_from = 2);

struct PlaneReport {
  bool hypothesis_ok = false;
  std::string note;
  std::vector<double> t;
  /// max over the window of |Du - (M x + c)| with the affine map fitted by
  /// least squares.
  std::vector<double> affine_deviation;
  std::vector<double> max_gradient;
  double tolerance = 0.0;
  bool pass = false;
};

/// Flatness of the graph (x, Du) over the window [-w, w]^n. The hypothesis
/// gate requires Du to be constant along the outermost interior layer of the
/// first snapshot (a linear far field); otherwise no verdict is given.
PlaneReport plane_convergence(const std::vector<Snapshot>& trajectory, double window_half_width = 1.0,
                              double tolerance = 0.02, double t_from = 1.0);

}  // namespace logflow
