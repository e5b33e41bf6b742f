#pragma once

#include <array>
#include <cstddef>

namespace logflow {

inline constexpr int kMaxDim = 3;

/// Points and vectors in R^n, n <= 3. Unused trailing components stay zero.
using Point = std::array<double, kMaxDim>;

/// Symmetric n x n matrix with n <= 3, stored densely.
struct SymMat {
  int n = 1;
  std::array<double, kMaxDim * kMaxDim> a{};

  SymMat() = default;
  explicit SymMat(int dim) : n(dim) {}

  static SymMat identity(int dim);
  static SymMat diagonal(int dim, const Point& d);
  static SymMat scaled_identity(int dim, double s);

  double operator()(int i, int j) const { return a[i * kMaxDim + j]; }
  double& operator()(int i, int j) { return a[i * kMaxDim + j]; }

  /// Writes both (i, j) and (j, i).
  void set(int i, int j, double v) {
    a[i * kMaxDim + j] = v;
    a[j * kMaxDim + i] = v;
  }

  double trace() const;
  double determinant() const;
  /// Adjugate (transpose of the cofactor matrix); symmetric for symmetric input.
  SymMat adjugate() const;
  SymMat inverse() const;
  /// True when every leading principal minor is positive.
  bool positive_definite() const;

  Point apply(const Point& v) const;
  double quadratic_form(const Point& v) const;

  friend bool operator==(const SymMat&, const SymMat&) = default;
};

struct EigenBounds {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Eigenvalues in ascending order (entries beyond n are zero). Closed form for
/// n <= 2, cyclic Jacobi rotations for n = 3.
Point eigenvalues(const SymMat& m);
EigenBounds eigen_bounds(const SymMat& m);

/// Plain (non-symmetric) product used when checking inverse relations.
std::array<double, kMaxDim * kMaxDim> multiply(const SymMat& lhs, const SymMat& rhs);

double dot(const Point& x, const Point& y, int n);

}  // namespace logflow
