#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "logflow/flow.hpp"
#include "logflow/grid.hpp"

namespace logflow {

enum class InitialKind {
  /// 0.5 x^T A x + b.x + c
  Quadratic,
  /// 0.5 x^T A x + b.x + c + amplitude * exp(-|x|^2 / width^2)
  QuadraticPlusBump,
  /// n = 1: u' = b + amplitude * exp(-x^2 / width^2).
  /// n > 1: b.x + amplitude * exp(-|x|^2 / width^2).
  LinearPlusBump,
  /// sum_k 0.5 a_k x_k^2 with a_k = a_plus for x_k > 0 and a_minus otherwise.
  /// Homogeneous of degree two but only C^1 across the coordinate planes.
  PiecewiseQuadratic,
};

std::string kind_name(InitialKind kind);
/// Throws DomainError naming the accepted kinds.
InitialKind parse_kind(const std::string& name);
std::vector<std::string> kind_names();

struct InitialDataSpec {
  InitialKind kind = InitialKind::Quadratic;
  int n = 1;
  SymMat A = SymMat::identity(1);
  Point b{};
  double c = 0.0;
  double amplitude = 0.0;
  double width = 1.0;
  double a_minus = 1.0;
  double a_plus = 1.0;

  /// Throws DomainError on inconsistent dimensions or parameters.
  void validate() const;
  double value(const Point& x) const;
};

GridFunction sample_initial(const InitialDataSpec& spec, const BoxDomain& domain);

/// Quadratic far field of the data when it has one (quadratic kinds).
std::optional<QuadraticFarField> far_field(const InitialDataSpec& spec);

/// Boundary model used when a configuration does not name one: the far field
/// for quadratic kinds, the orthant-wise exact evolution for piecewise
/// quadratics, Frozen for linear-plus-bump.
BoundaryModel default_boundary(const InitialDataSpec& spec, double tau);

/// u(x, t) in closed form where the data allows it (quadratic only).
std::optional<std::function<double(const Point&, double)>> exact_solution(const InitialDataSpec& spec, double tau);

}  // namespace logflow
