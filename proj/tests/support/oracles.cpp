#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {
namespace {

double det3(const SymMat& m, int n) {
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

// Inverse by cofactors; independent of the library's own routine.
SymMat inverse(const SymMat& m, int n) {
  SymMat r(n);
  const double d = det3(m, n);
  if (n == 1) {
    r(0, 0) = 1.0 / d;
    return r;
  }
  if (n == 2) {
    r(0, 0) = m(1, 1) / d;
    r(1, 1) = m(0, 0) / d;
    r(0, 1) = r(1, 0) = -m(0, 1) / d;
    return r;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      r(i, j) = (m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0)) / d;
    }
  return r;
}

}  // namespace

double Gaussian::value(const Point& x) const {
  double r2 = 0.0;
  for (int i = 0; i < n; ++i) r2 += x[i] * x[i];
  return eps * std::exp(-r2 / (w * w));
}

Point Gaussian::gradient(const Point& x) const {
  const double c = 1.0 / (w * w), f = value(x);
  Point g{};
  for (int i = 0; i < n; ++i) g[i] = -2.0 * c * x[i] * f;
  return g;
}

SymMat Gaussian::hessian(const Point& x) const {
  const double c = 1.0 / (w * w), f = value(x);
  SymMat h(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = (4.0 * c * c * x[i] * x[j] - (i == j ? 2.0 * c : 0.0)) * f;
  return h;
}

double Gaussian::third(const Point& x, int i, int j, int k) const {
  const double c = 1.0 / (w * w), f = value(x);
  const double d = (i == k ? x[j] : 0.0) + (j == k ? x[i] : 0.0) + (i == j ? x[k] : 0.0);
  return (4.0 * c * c * d - 8.0 * c * c * c * x[i] * x[j] * x[k]) * f;
}

double Gaussian::third_frobenius(const Point& x) const {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += std::pow(third(x, i, j, k), 2);
  return std::sqrt(s);
}

double QuadraticPlusGaussian::value(const Point& x) const {
  double q = 0.0;
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) q += 0.5 * x[i] * A(i, j) * x[j];
  return q + bump.value(x);
}

Point QuadraticPlusGaussian::gradient(const Point& x) const {
  Point g = bump.gradient(x);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) g[i] += A(i, j) * x[j];
  return g;
}

SymMat QuadraticPlusGaussian::hessian(const Point& x) const {
  SymMat h = bump.hessian(x);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) h(i, j) += A(i, j);
  return h;
}

std::vector<double> char_poly_eigenvalues(const SymMat& m) {
  const int n = m.n;
  if (n == 1) return {m(0, 0)};
  if (n == 2) {
    const double tr = m(0, 0) + m(1, 1), det = m(0, 0) * m(1, 1) - m(0, 1) * m(0, 1);
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return {tr / 2.0 - disc, tr / 2.0 + disc};
  }
  const double p1 = m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
  const double q = (m(0, 0) + m(1, 1) + m(2, 2)) / 3.0;
  if (p1 == 0.0) {
    std::vector<double> e{m(0, 0), m(1, 1), m(2, 2)};
    std::sort(e.begin(), e.end());
    return e;
  }
  const double p2 =
      std::pow(m(0, 0) - q, 2) + std::pow(m(1, 1) - q, 2) + std::pow(m(2, 2) - q, 2) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  SymMat B(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) B(i, j) = (m(i, j) - (i == j ? q : 0.0)) / p;
  const double r = std::clamp(det3(B, 3) / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  return {e3, 3.0 * q - e1 - e3, e1};
}

NullPair mean_curvature(const QuadraticPlusGaussian& f, const Point& x, int n) {
  const SymMat H = f.hessian(x);
  const SymMat Hinv = inverse(H, n);
  const double g = det3(H, n);
  Point dg{};
  for (int l = 0; l < n; ++l) {
    double tr = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) tr += Hinv(i, j) * f.third(x, j, i, l);
    dg[l] = g * tr;
  }
  NullPair out;
  for (int k = 0; k < n; ++k) {
    double coeff = 0.0;
    for (int l = 0; l < n; ++l) coeff += dg[l] * Hinv(l, k);
    coeff *= -1.0 / (2.0 * n * g);
    out.x[k] += coeff;
    for (int j = 0; j < n; ++j) out.y[j] -= coeff * H(k, j);
  }
  return out;
}

std::array<double, 2> expander_1d(double a, double slope, double r, int steps) {
  using S = std::array<double, 2>;
  return rk4<2>([](double s, const S& y) { return S{y[1], std::exp(y[0] - 0.5 * s * y[1])}; }, S{a, slope}, 0.0,
                r, steps);
}

SymMat Generator::spd(int n, double lo, double hi) {
  // Orthonormal basis by Gram-Schmidt on random vectors.
  std::array<Point, 3> q{};
  for (int k = 0; k < n; ++k) {
    Point v = point(n, 1.0);
    for (int j = 0; j < k; ++j) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d += v[i] * q[j][i];
      for (int i = 0; i < n; ++i) v[i] -= d * q[j][i];
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += v[i] * v[i];
    norm = std::sqrt(norm);
    if (norm < 1e-3) return spd(n, lo, hi);
    for (int i = 0; i < n; ++i) q[k][i] = v[i] / norm;
  }
  Point lam{};
  for (int k = 0; k < n; ++k) lam[k] = uniform(lo, hi);
  SymMat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += q[k][i] * lam[k] * q[k][j];
      m(i, j) = s;
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m(j, i) = m(i, j);
  return m;
}

SymMat Generator::symmetric(int n, double s) {
  SymMat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m.set(i, j, uniform(-s, s));
  return m;
}

Point Generator::point(int n, double s) {
  Point p{};
  for (int i = 0; i < n; ++i) p[i] = uniform(-s, s);
  return p;
}

double interior_error(const logflow::GridFunction& u, const std::function<double(const Point&)>& f, int lo) {
  double worst = 0.0;
  const auto& d = u.domain();
  logflow::for_each_node(d, lo, [&](std::size_t flat, const logflow::Index& idx) {
    worst = std::max(worst, std::abs(u[flat] - f(d.coordinate(idx))));
  });
  return worst;
}

}  // namespace oracle
