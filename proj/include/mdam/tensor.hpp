#pragma once

#include <array>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "mdam/errors.hpp"

namespace mdam {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat66 = Eigen::Matrix<double, 6, 6>;

/// Symmetric second-order tensor, six stored components.
/// Mandel (orthonormal) 6-vector convention: [xx, yy, zz, s*xy, s*xz, s*yz],
/// s = sqrt(2), so double contraction equals the plain 6-vector dot product.
struct SymTensor2 {
  double xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0;

  static SymTensor2 identity() { return {1, 1, 1, 0, 0, 0}; }

  double trace() const { return xx + yy + zz; }

  SymTensor2 deviator() const {
    const double p = trace() / 3.0;
    return {xx - p, yy - p, zz - p, xy, xz, yz};
  }

  double double_dot(const SymTensor2& o) const {
    return xx * o.xx + yy * o.yy + zz * o.zz + 2.0 * (xy * o.xy + xz * o.xz + yz * o.yz);
  }

  double norm() const { return std::sqrt(double_dot(*this)); }

  bool finite() const {
    return std::isfinite(xx) && std::isfinite(yy) && std::isfinite(zz) && std::isfinite(xy) &&
           std::isfinite(xz) && std::isfinite(yz);
  }

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d a;
    a << xx, xy, xz, xy, yy, yz, xz, yz, zz;
    return a;
  }

  /// Symmetric part of a full 3x3 matrix.
  static SymTensor2 from_matrix(const Eigen::Matrix3d& a) {
    return {a(0, 0), a(1, 1), a(2, 2), 0.5 * (a(0, 1) + a(1, 0)), 0.5 * (a(0, 2) + a(2, 0)),
            0.5 * (a(1, 2) + a(2, 1))};
  }

  Vec6 mandel() const {
    const double s = std::sqrt(2.0);
    Vec6 v;
    v << xx, yy, zz, s * xy, s * xz, s * yz;
    return v;
  }

  static SymTensor2 from_mandel(const Vec6& v) {
    const double s = 1.0 / std::sqrt(2.0);
    return {v[0], v[1], v[2], s * v[3], s * v[4], s * v[5]};
  }

  SymTensor2 operator+(const SymTensor2& o) const {
    return {xx + o.xx, yy + o.yy, zz + o.zz, xy + o.xy, xz + o.xz, yz + o.yz};
  }
  SymTensor2 operator-(const SymTensor2& o) const {
    return {xx - o.xx, yy - o.yy, zz - o.zz, xy - o.xy, xz - o.xz, yz - o.yz};
  }
  SymTensor2 operator-() const { return {-xx, -yy, -zz, -xy, -xz, -yz}; }
  SymTensor2 operator*(double c) const { return {c * xx, c * yy, c * zz, c * xy, c * xz, c * yz}; }
  SymTensor2& operator+=(const SymTensor2& o) { return *this = *this + o; }
  SymTensor2& operator-=(const SymTensor2& o) { return *this = *this - o; }
};

inline SymTensor2 operator*(double c, const SymTensor2& a) { return a * c; }

/// dev A = A - (tr A / 3) I
inline SymTensor2 deviator(const SymTensor2& a) { return a.deviator(); }
inline double trace(const SymTensor2& a) { return a.trace(); }

/// Symmetric part of the 3x3 product a*b.
inline SymTensor2 sym_product(const SymTensor2& a, const SymTensor2& b) {
  return SymTensor2::from_matrix(a.matrix() * b.matrix());
}

/// Fourth-order tensor with minor symmetries, stored as a 6x6 matrix in the
/// Mandel basis so that double contraction is a matrix-vector product.
struct SymTensor4 {
  Mat66 m = Mat66::Zero();

  static SymTensor4 zero() { return {}; }

  static SymTensor4 identity() {
    SymTensor4 t;
    t.m = Mat66::Identity();
    return t;
  }

  /// P_dev : X = dev X
  static SymTensor4 deviatoric_projector() {
    SymTensor4 t = identity();
    const Vec6 mi = SymTensor2::identity().mandel();
    t.m -= (mi * mi.transpose()) / 3.0;
    return t;
  }

  /// a (x) b, i.e. (a (x) b) : X = (b : X) a
  static SymTensor4 outer(const SymTensor2& a, const SymTensor2& b) {
    SymTensor4 t;
    t.m = a.mandel() * b.mandel().transpose();
    return t;
  }

  SymTensor2 apply(const SymTensor2& x) const { return SymTensor2::from_mandel(m * x.mandel()); }

  SymTensor4 transpose() const {
    SymTensor4 t;
    t.m = m.transpose();
    return t;
  }

  SymTensor4 operator+(const SymTensor4& o) const {
    SymTensor4 t;
    t.m = m + o.m;
    return t;
  }
  SymTensor4 operator-(const SymTensor4& o) const {
    SymTensor4 t;
    t.m = m - o.m;
    return t;
  }
  SymTensor4 operator*(double c) const {
    SymTensor4 t;
    t.m = c * m;
    return t;
  }
  /// Operator composition (this after o).
  SymTensor4 operator*(const SymTensor4& o) const {
    SymTensor4 t;
    t.m = m * o.m;
    return t;
  }
  SymTensor4& operator+=(const SymTensor4& o) {
    m += o.m;
    return *this;
  }
  SymTensor4& operator-=(const SymTensor4& o) {
    m -= o.m;
    return *this;
  }
};

inline SymTensor4 operator*(double c, const SymTensor4& a) { return a * c; }

/// Eigenvalues in descending order with the matching orthonormal eigenvectors
/// as columns of `vectors`.
struct Spectrum {
  std::array<double, 3> lambda{};
  Eigen::Matrix3d vectors = Eigen::Matrix3d::Identity();

  SymTensor2 recompose(const std::array<double, 3>& f) const {
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i)
      a += f[i] * (vectors.col(i) * vectors.col(i).transpose());
    return SymTensor2::from_matrix(a);
  }

  double gap_tolerance() const {
    const double nrm =
        std::sqrt(lambda[0] * lambda[0] + lambda[1] * lambda[1] + lambda[2] * lambda[2]);
    return 1e-9 * std::max(1.0, nrm);
  }
};

/// Closed-form 3x3 symmetric eigendecomposition with an iterative fallback
/// when the reconstruction residual indicates near-degeneracy trouble.
Spectrum spectral_decompose(const SymTensor2& a);

/// Derivative of A -> sum_i f(lambda_i) n_i (x) n_i given sampled f(lambda_i)
/// and f'(lambda_i), using divided differences with the repeated-eigenvalue
/// limit below `gap_tol`.
SymTensor4 spectral_derivative(const Spectrum& s, const std::array<double, 3>& fval,
                               const std::array<double, 3>& fprime, double gap_tol);

/// Directional second derivative d/dA [ (dF/dA) : V ] for fixed V, where
/// F(A) = sum_i f(lambda_i) n_i (x) n_i. Needs f, f', f'' samples at the
/// eigenvalues; second divided differences carry the degenerate limits.
SymTensor4 spectral_dderiv_contract(const Spectrum& s, const SymTensor2& v,
                                    const std::array<double, 3>& fval,
                                    const std::array<double, 3>& fprime,
                                    const std::array<double, 3>& fsecond, double gap_tol);

/// Isotropic tensor function value and derivative from scalar kernel f, f'.
template <class F, class DF>
std::pair<SymTensor2, SymTensor4> isotropic_function(const SymTensor2& a, F&& f, DF&& df) {
  const Spectrum s = spectral_decompose(a);
  std::array<double, 3> fv, fp;
  for (int i = 0; i < 3; ++i) {
    fv[i] = f(s.lambda[i]);
    fp[i] = df(s.lambda[i]);
  }
  for (int i = 0; i < 3; ++i)
    if (!std::isfinite(fv[i]) || !std::isfinite(fp[i]))
      throw DomainError("isotropic_function: kernel undefined at eigenvalue");
  return {s.recompose(fv), spectral_derivative(s, fv, fp, s.gap_tolerance())};
}

template <class F>
SymTensor2 isotropic_function_value(const SymTensor2& a, F&& f) {
  const Spectrum s = spectral_decompose(a);
  std::array<double, 3> fv;
  for (int i = 0; i < 3; ++i) {
    fv[i] = f(s.lambda[i]);
    if (!std::isfinite(fv[i]))
      throw DomainError("isotropic_function_value: kernel undefined at eigenvalue");
  }
  return s.recompose(fv);
}

/// eta = 1/2 ln C and the projection P = d(ln C)/dC = 2 d(eta)/dC.
/// Throws NonPositiveDefinite when C has a non-positive eigenvalue.
std::pair<SymTensor2, SymTensor4> tensor_log_strain(const SymTensor2& c);

/// Spectral clamp <Y> = sum <lambda_i> n_i (x) n_i.
SymTensor2 positive_part(const SymTensor2& y);

/// Positive part together with its derivative (active-set projector).
std::pair<SymTensor2, SymTensor4> positive_part_with_projection(const SymTensor2& y);

/// d/dY [ (dY+/dY) : V ] at fixed V (ramp-kernel second derivative).
SymTensor4 positive_part_dderiv_contract(const SymTensor2& y, const SymTensor2& v);

/// d/dC [ (d ln C/dC) : V ] at fixed V.
SymTensor4 log_dderiv_contract(const SymTensor2& c, const SymTensor2& v);

/// Mandel representation of (A (x) B)^T23, i.e. the operator X -> sym(A X B).
/// For A = B (the only model use) the action is exactly A X A.
SymTensor4 t23_dyadic(const SymTensor2& a, const SymTensor2& b);

SymTensor2 tensor_exp(const SymTensor2& a);

}  // namespace mdam
