#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "logflow/errors.hpp"
#include "logflow/grid.hpp"
#include "logflow/snapshot.hpp"

namespace logflow {

/// F_tau(A) = (tau/n) ln det A + (1 - tau) tr A.
double operator_value(const SymMat& A, double tau);

/// Far field 0.5 x^T A x + b.x + c, evolved exactly: quadratic data stays
/// quadratic and gains t * F_tau(A).
struct QuadraticFarField {
  SymMat A;
  Point b{};
  double c = 0.0;

  double value(const Point& x, double t, double tau) const;
  double rate(double tau) const { return operator_value(A, tau); }
};

/// Closed-form u_ref(x, t) imposed on the boundary layer.
struct ReferenceSolution {
  std::string name;
  std::function<double(const Point&, double)> fn;
};

/// Boundary values stay at their initial samples.
struct Frozen {};

using BoundaryModel = std::variant<QuadraticFarField, ReferenceSolution, Frozen>;

std::string boundary_kind(const BoundaryModel& b);

/// QuadraticFarField fitted to u0 at its first monitored corner node:
/// A = D^2u0 there, b and c matched to Du0 and u0.
QuadraticFarField corner_far_field(const GridFunction& u0);

struct MonitorRecord {
  double t = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double grad_sq_window = 0.0;
  double d3_norm = 0.0;
  double dt = 0.0;
  double residual = 0.0;
};

struct MonitorConfig {
  /// Half-width of the compact window for sup |Du|^2; <= 0 means the whole
  /// monitored interior.
  double window_half_width = 1.0;
  bool third_derivative = true;
};

enum class Stepper { ForwardEuler, Midpoint };

/// rhs(u, t) together with the Hessian statistics gathered while computing it.
struct RhsCache {
  std::vector<double> values;
  /// Smallest eigenvalue over all interior nodes (drives dt_stable).
  double lambda_min_all = 0.0;
  /// Eigenvalue extrema over the monitored interior.
  EigenBounds monitored;
};

/// One trajectory of the tau family. `rhs_cache` holds rhs(u, t) when known
/// so consecutive steps do not evaluate it twice.
struct FlowState {
  GridFunction u;
  double t = 0.0;
  double tau = 1.0;
  BoundaryModel boundary = Frozen{};
  long step_count = 0;
  std::vector<MonitorRecord> monitor_log;
  std::shared_ptr<const RhsCache> rhs_cache;
  /// Initial boundary samples, needed by the Frozen model.
  std::shared_ptr<const std::vector<double>> frozen_values;
};

FlowState make_state(const GridFunction& u0, double tau, BoundaryModel boundary, double t0 = 0.0);

/// Thrown when a step still loses convexity after the maximum number of
/// dt halvings; carries the last accepted state.
class AbortedNonConvex : public Error {
 public:
  AbortedNonConvex(const std::string& what, FlowState last_good)
      : Error(what), last_good_(std::make_shared<FlowState>(std::move(last_good))) {}
  const FlowState& last_good() const { return *last_good_; }

 private:
  std::shared_ptr<FlowState> last_good_;
};

/// Nodewise F_tau(D^2u) on interior nodes. Boundary nodes carry the rate of
/// the boundary model when one is given (zero for Frozen), otherwise the
/// nearest interior value.
GridFunction rhs(const GridFunction& u, double tau);
GridFunction rhs(const GridFunction& u, double tau, const BoundaryModel& boundary, double t);

/// safety * h^2 / (2 n mu_max), mu_max = max_nodes tau/(n lambda_min) + (1 - tau).
double dt_stable(const FlowState& state, double safety = 0.5);
double dt_stable(const GridFunction& u, double tau, double safety = 0.5);

struct StepOptions {
  Stepper stepper = Stepper::Midpoint;
  int max_halvings = 20;
  MonitorConfig monitors;
};

/// Advances by dt (halving on NonConvexityError), overwrites the boundary
/// layer from the boundary model and appends a MonitorRecord.
FlowState step_explicit(const FlowState& state, double dt, const StepOptions& opts = {});

struct RunConfig {
  StepOptions step;
  double safety = 0.5;
  /// Snapshot times in (0, t_end]; the initial state is always recorded.
  std::vector<double> snapshot_times;
  /// Upper bound on dt, 0 = none.
  double dt_max = 0.0;
  /// Fixed dt instead of dt_stable, 0 = adaptive.
  double dt_fixed = 0.0;
  /// Condition B bounds expected at t = 0; checked with slack 1e-10 and
  /// reported as a warning when violated.
  std::optional<std::pair<double, double>> condition_b;
  bool record_monitors = true;
};

struct RunResult {
  FlowState final_state;
  std::vector<Snapshot> snapshots;
  std::vector<std::string> warnings;
};

/// Integrates from u0 to t_end. The boundary layer of u0 is replaced by the
/// boundary model at t = 0 before the first step.
RunResult run(const GridFunction& u0, double tau, double t_end, const BoundaryModel& boundary,
              const RunConfig& config = {});

/// {t0, 2 t0, 4 t0, ...} with `count` entries.
std::vector<double> geometric_times(double t0, int count);
/// t_begin (when positive), t_begin + every, ... up to t_end.
std::vector<double> uniform_times(double t_begin, double t_end, double every);

/// Interior sup-norm of (u(t+dt) - u(t))/dt - rhs(u(t+dt/2)).
double pde_residual(const Snapshot& start, const Snapshot& mid, const Snapshot& end);

/// Same, sampling a trajectory given in closed form.
double pde_residual(const std::function<GridFunction(double)>& trajectory, double t, double dt_probe, double tau);

}  // namespace logflow
