#include "logflow/interpolation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "logflow/errors.hpp"

namespace logflow {
namespace {

struct AxisWeights {
  int base = 0;
  std::array<double, 4> w{};
  std::array<double, 4> d1{};
  std::array<double, 4> d2{};
};

AxisWeights cubic_weights(double coord, const BoxDomain& d) {
  const int m = d.points_per_axis;
  const double h = d.spacing();
  const double s = (coord + d.half_width) / h;
  const int cell = std::clamp(static_cast<int>(std::floor(s)), 0, m - 2);
  AxisWeights aw;
  aw.base = std::clamp(cell - 1, 0, m - 4);
  const double t = s - aw.base;
  for (int j = 0; j < 4; ++j) {
    double denom = 1.0;
    for (int k = 0; k < 4; ++k)
      if (k != j) denom *= (j - k);
    double val = 1.0;
    for (int k = 0; k < 4; ++k)
      if (k != j) val *= (t - k);
    double der = 0.0;
    double der2 = 0.0;
    for (int p = 0; p < 4; ++p) {
      if (p == j) continue;
      double prod = 1.0;
      for (int k = 0; k < 4; ++k)
        if (k != j && k != p) prod *= (t - k);
      der += prod;
      for (int q = 0; q < 4; ++q) {
        if (q == j || q == p) continue;
        double prod2 = 1.0;
        for (int k = 0; k < 4; ++k)
          if (k != j && k != p && k != q) prod2 *= (t - k);
        der2 += prod2;
      }
    }
    aw.w[j] = val / denom;
    aw.d1[j] = der / denom / h;
    aw.d2[j] = der2 / denom / (h * h);
  }
  return aw;
}

}  // namespace

CubicInterpolator::CubicInterpolator(const BoxDomain& domain, std::vector<double> values)
    : domain_(domain), values_(std::move(values)) {
  domain_.validate();
  if (values_.size() != domain_.node_count()) throw DomainError("CubicInterpolator: value count mismatch");
}

CubicInterpolator::CubicInterpolator(const GridFunction& u)
    : CubicInterpolator(u.domain(), std::vector<double>(u.values().begin(), u.values().end())) {}

bool CubicInterpolator::contains(const Point& x) const {
  const double tol = 1e-12 * domain_.half_width;
  for (int k = 0; k < domain_.n; ++k)
    if (std::abs(x[k]) > domain_.half_width + tol) return false;
  return true;
}

double CubicInterpolator::value(const Point& x) const {
  const int n = domain_.n;
  std::array<AxisWeights, kMaxDim> aw{};
  for (int k = 0; k < n; ++k) aw[k] = cubic_weights(x[k], domain_);
  const int ca = 4, cb = n >= 2 ? 4 : 1, cc = n >= 3 ? 4 : 1;
  double acc = 0.0;
  for (int a = 0; a < ca; ++a)
    for (int b = 0; b < cb; ++b)
      for (int c = 0; c < cc; ++c) {
        Index idx{aw[0].base + a, n >= 2 ? aw[1].base + b : 0, n >= 3 ? aw[2].base + c : 0};
        double w = aw[0].w[a];
        if (n >= 2) w *= aw[1].w[b];
        if (n >= 3) w *= aw[2].w[c];
        acc += w * values_[domain_.flatten(idx)];
      }
  return acc;
}

LocalJet CubicInterpolator::jet(const Point& x) const {
  const int n = domain_.n;
  std::array<AxisWeights, kMaxDim> aw{};
  for (int k = 0; k < n; ++k) aw[k] = cubic_weights(x[k], domain_);
  LocalJet jet;
  jet.hessian = SymMat(n);
  const int cb = n >= 2 ? 4 : 1, cc = n >= 3 ? 4 : 1;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < cb; ++b)
      for (int c = 0; c < cc; ++c) {
        const std::array<int, kMaxDim> local{a, b, c};
        Index idx{aw[0].base + a, n >= 2 ? aw[1].base + b : 0, n >= 3 ? aw[2].base + c : 0};
        const double v = values_[domain_.flatten(idx)];
        // Weight for the product with axis p replaced by derivative data.
        auto weight = [&](int p, int order_p, int q, int order_q) {
          double w = 1.0;
          for (int k = 0; k < n; ++k) {
            const int j = local[k];
            int order = 0;
            if (k == p) order += order_p;
            if (k == q) order += order_q;
            w *= order == 0 ? aw[k].w[j] : order == 1 ? aw[k].d1[j] : aw[k].d2[j];
          }
          return w;
        };
        jet.value += weight(-1, 0, -1, 0) * v;
        for (int k = 0; k < n; ++k) {
          jet.gradient[k] += weight(k, 1, -1, 0) * v;
          for (int l = k; l < n; ++l) jet.hessian(k, l) += weight(k, 1, l, 1) * v;
        }
      }
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) jet.hessian(l, k) = jet.hessian(k, l);
  return jet;
}

double multilinear(const BoxDomain& d, std::span<const double> values, const Point& x) {
  const int n = d.n;
  const int m = d.points_per_axis;
  const double h = d.spacing();
  std::array<int, kMaxDim> cell{};
  std::array<double, kMaxDim> frac{};
  for (int k = 0; k < n; ++k) {
    const double s = (x[k] + d.half_width) / h;
    cell[k] = std::clamp(static_cast<int>(std::floor(s)), 0, m - 2);
    frac[k] = s - cell[k];
  }
  double acc = 0.0;
  const int corners = 1 << n;
  for (int c = 0; c < corners; ++c) {
    Index idx{0, 0, 0};
    double w = 1.0;
    for (int k = 0; k < n; ++k) {
      const int bit = (c >> k) & 1;
      idx[k] = cell[k] + bit;
      w *= bit ? frac[k] : 1.0 - frac[k];
    }
    acc += w * values[d.flatten(idx)];
  }
  return acc;
}

}  // namespace logflow
