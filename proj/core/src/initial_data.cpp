#include "logflow/initial_data.hpp"

#include <cmath>
#include <numbers>

namespace logflow {
namespace {

struct KindEntry {
  InitialKind kind;
  const char* name;
};

constexpr KindEntry kKinds[] = {
    {InitialKind::Quadratic, "quadratic"},
    {InitialKind::QuadraticPlusBump, "quadratic_plus_bump"},
    {InitialKind::LinearPlusBump, "linear_plus_bump"},
    {InitialKind::PiecewiseQuadratic, "piecewise_quadratic"},
};

double bump(const InitialDataSpec& s, const Point& x) {
  return s.amplitude * std::exp(-dot(x, x, s.n) / (s.width * s.width));
}

double orthant_coefficient(const InitialDataSpec& s, double xk) { return xk > 0.0 ? s.a_plus : s.a_minus; }

}  // namespace

std::string kind_name(InitialKind kind) {
  for (const auto& e : kKinds)
    if (e.kind == kind) return e.name;
  return "unknown";
}

std::vector<std::string> kind_names() {
  std::vector<std::string> out;
  for (const auto& e : kKinds) out.emplace_back(e.name);
  return out;
}

InitialKind parse_kind(const std::string& name) {
  for (const auto& e : kKinds)
    if (name == e.name) return e.kind;
  std::string list;
  for (const auto& e : kKinds) list += std::string(list.empty() ? "" : ", ") + e.name;
  throw DomainError("unknown initial data kind '" + name + "' (expected one of: " + list + ")");
}

void InitialDataSpec::validate() const {
  if (n < 1 || n > kMaxDim) throw DomainError("initial data dimension must be 1, 2 or 3");
  if (A.n != n) throw DomainError("matrix A has dimension " + std::to_string(A.n) + ", expected " + std::to_string(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (A(i, j) != A(j, i)) throw DomainError("matrix A must be symmetric");
  if ((kind == InitialKind::Quadratic || kind == InitialKind::QuadraticPlusBump) && !A.positive_definite())
    throw DomainError("matrix A must be positive definite");
  if (!(width > 0.0)) throw DomainError("bump width must be positive");
  if (kind == InitialKind::PiecewiseQuadratic && !(a_minus > 0.0 && a_plus > 0.0))
    throw DomainError("piecewise quadratic coefficients must be positive");
}

double InitialDataSpec::value(const Point& x) const {
  switch (kind) {
    case InitialKind::Quadratic:
      return 0.5 * A.quadratic_form(x) + dot(b, x, n) + c;
    case InitialKind::QuadraticPlusBump:
      return 0.5 * A.quadratic_form(x) + dot(b, x, n) + c + bump(*this, x);
    case InitialKind::LinearPlusBump:
      if (n == 1) return b[0] * x[0] + c + amplitude * width * 0.5 * std::sqrt(std::numbers::pi) * std::erf(x[0] / width);
      return dot(b, x, n) + c + bump(*this, x);
    case InitialKind::PiecewiseQuadratic: {
      double v = 0.0;
      for (int k = 0; k < n; ++k) v += 0.5 * orthant_coefficient(*this, x[k]) * x[k] * x[k];
      return v;
    }
  }
  return 0.0;
}

GridFunction sample_initial(const InitialDataSpec& spec, const BoxDomain& domain) {
  spec.validate();
  if (spec.n != domain.n) throw DomainError("initial data and grid dimensions differ");
  domain.validate();
  return GridFunction::sample(domain, [&](const Point& x) { return spec.value(x); }, kind_name(spec.kind));
}

std::optional<QuadraticFarField> far_field(const InitialDataSpec& spec) {
  if (spec.kind != InitialKind::Quadratic && spec.kind != InitialKind::QuadraticPlusBump) return std::nullopt;
  return QuadraticFarField{spec.A, spec.b, spec.c};
}

BoundaryModel default_boundary(const InitialDataSpec& spec, double tau) {
  if (auto ff = far_field(spec)) return *ff;
  if (spec.kind == InitialKind::PiecewiseQuadratic) {
    // Away from the kinks each orthant carries its own quadratic, which
    // evolves exactly; the self-similar correction is exponentially small
    // at distance >> sqrt(t) from the coordinate planes.
    InitialDataSpec s = spec;
    return ReferenceSolution{"orthant_quadratics", [s, tau](const Point& x, double t) {
                               Point d{};
                               for (int k = 0; k < s.n; ++k) d[k] = orthant_coefficient(s, x[k]);
                               return s.value(x) + t * operator_value(SymMat::diagonal(s.n, d), tau);
                             }};
  }
  return Frozen{};
}

std::optional<std::function<double(const Point&, double)>> exact_solution(const InitialDataSpec& spec, double tau) {
  if (spec.kind != InitialKind::Quadratic) return std::nullopt;
  const QuadraticFarField ff{spec.A, spec.b, spec.c};
  return [ff, tau](const Point& x, double t) { return ff.value(x, t, tau); };
}

}  // namespace logflow
