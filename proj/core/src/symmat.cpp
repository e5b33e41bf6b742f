#include "logflow/symmat.hpp"

#include <algorithm>
#include <cmath>

namespace logflow {

SymMat SymMat::identity(int dim) { return scaled_identity(dim, 1.0); }

SymMat SymMat::scaled_identity(int dim, double s) {
  SymMat m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = s;
  return m;
}

SymMat SymMat::diagonal(int dim, const Point& d) {
  SymMat m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = d[i];
  return m;
}

double SymMat::trace() const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += (*this)(i, i);
  return s;
}

double SymMat::determinant() const {
  const auto& m = *this;
  switch (n) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    default:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  }
}

SymMat SymMat::adjugate() const {
  const auto& m = *this;
  SymMat r(n);
  switch (n) {
    case 1:
      r(0, 0) = 1.0;
      break;
    case 2:
      r(0, 0) = m(1, 1);
      r(1, 1) = m(0, 0);
      r(0, 1) = -m(0, 1);
      r(1, 0) = -m(1, 0);
      break;
    default:
      r(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
      r(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
      r(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
      r(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
      r(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
      r(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
      r(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
      r(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
      r(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
      break;
  }
  return r;
}

SymMat SymMat::inverse() const {
  SymMat r = adjugate();
  const double det = determinant();
  for (auto& v : r.a) v /= det;
  return r;
}

bool SymMat::positive_definite() const {
  const auto& m = *this;
  if (!(m(0, 0) > 0.0)) return false;
  if (n >= 2 && !(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) > 0.0)) return false;
  if (n == 3 && !(determinant() > 0.0)) return false;
  return true;
}

Point SymMat::apply(const Point& v) const {
  Point r{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i] += (*this)(i, j) * v[j];
  return r;
}

double SymMat::quadratic_form(const Point& v) const { return dot(v, apply(v), n); }

namespace {

Point jacobi_eigenvalues(SymMat m) {
  // Cyclic Jacobi sweeps; 3x3 converges in a handful of sweeps.
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 3; ++q) off += m(p, q) * m(p, q);
    double scale = 0.0;
    for (double v : m.a) scale = std::max(scale, std::abs(v));
    if (off <= 1e-34 * scale * scale || off == 0.0) break;

    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < 3; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  Point ev{m(0, 0), m(1, 1), m(2, 2)};
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace

Point eigenvalues(const SymMat& m) {
  switch (m.n) {
    case 1:
      return {m(0, 0), 0.0, 0.0};
    case 2: {
      const double mean = 0.5 * (m(0, 0) + m(1, 1));
      const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
      const double radius = std::hypot(half_diff, m(0, 1));
      return {mean - radius, mean + radius, 0.0};
    }
    default:
      return jacobi_eigenvalues(m);
  }
}

EigenBounds eigen_bounds(const SymMat& m) {
  const Point ev = eigenvalues(m);
  return {ev[0], ev[m.n - 1]};
}

std::array<double, kMaxDim * kMaxDim> multiply(const SymMat& lhs, const SymMat& rhs) {
  std::array<double, kMaxDim * kMaxDim> r{};
  for (int i = 0; i < lhs.n; ++i)
    for (int j = 0; j < lhs.n; ++j) {
      double s = 0.0;
      for (int k = 0; k < lhs.n; ++k) s += lhs(i, k) * rhs(k, j);
      r[i * kMaxDim + j] = s;
    }
  return r;
}

double dot(const Point& x, const Point& y, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

}  // namespace logflow
