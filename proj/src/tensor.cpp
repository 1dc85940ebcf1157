#include "mdam/tensor.hpp"

#include <algorithm>

namespace mdam {

namespace {

// Orthonormal Mandel basis tensors.
const std::array<SymTensor2, 6>& mandel_basis() {
  static const double s = 1.0 / std::sqrt(2.0);
  static const std::array<SymTensor2, 6> basis = {
      SymTensor2{1, 0, 0, 0, 0, 0}, SymTensor2{0, 1, 0, 0, 0, 0}, SymTensor2{0, 0, 1, 0, 0, 0},
      SymTensor2{0, 0, 0, s, 0, 0}, SymTensor2{0, 0, 0, 0, s, 0}, SymTensor2{0, 0, 0, 0, 0, s}};
  return basis;
}

double divided_difference1(double fa, double fb, double fpa, double fpb, double a, double b,
                           double tol) {
  if (std::abs(a - b) <= tol)
    return 0.5 * (fpa + fpb);
  return (fa - fb) / (a - b);
}

struct KernelSamples {
  std::array<double, 3> lam, f, fp, fpp;
};

// Second divided difference f[lam_i, lam_j, lam_k], fully symmetric in its
// arguments. The pair with the largest gap is placed at the ends so the outer
// division stays well conditioned; all-degenerate collapses to f''/2.
double divided_difference2(const KernelSamples& k, int i, int j, int m, double tol) {
  int idx[3] = {i, j, m};
  // choose outer pair (p,r) with maximal gap, middle q
  int p = idx[0], q = idx[1], r = idx[2];
  double best = std::abs(k.lam[idx[0]] - k.lam[idx[2]]);
  const int perms[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}};
  for (const auto& pm : perms) {
    const double gap = std::abs(k.lam[idx[pm[0]]] - k.lam[idx[pm[2]]]);
    if (gap > best) {
      best = gap;
      p = idx[pm[0]];
      q = idx[pm[1]];
      r = idx[pm[2]];
    }
  }
  if (best <= tol)
    return (k.fpp[i] + k.fpp[j] + k.fpp[m]) / 6.0;  // mean f''/2
  const double d_pq =
      divided_difference1(k.f[p], k.f[q], k.fp[p], k.fp[q], k.lam[p], k.lam[q], tol);
  const double d_qr =
      divided_difference1(k.f[q], k.f[r], k.fp[q], k.fp[r], k.lam[q], k.lam[r], tol);
  return (d_pq - d_qr) / (k.lam[p] - k.lam[r]);
}

}  // namespace

Spectrum spectral_decompose(const SymTensor2& a) {
  if (!a.finite())
    throw InvalidTensor("spectral_decompose: non-finite input");
  const Eigen::Matrix3d m = a.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
  es.computeDirect(m);
  const double nrm = std::max(1e-300, m.norm());
  double err = (es.eigenvectors() * es.eigenvalues().asDiagonal() * es.eigenvectors().transpose() -
                m)
                   .norm();
  if (err > 1e-13 * std::max(1.0, nrm)) {
    es.compute(m);  // iterative refinement path
  }
  Spectrum s;
  // Eigen returns ascending order; flip to descending.
  for (int i = 0; i < 3; ++i) {
    s.lambda[i] = es.eigenvalues()[2 - i];
    s.vectors.col(i) = es.eigenvectors().col(2 - i);
  }
  if (s.vectors.determinant() < 0)
    s.vectors.col(2) *= -1.0;
  return s;
}

SymTensor4 spectral_derivative(const Spectrum& s, const std::array<double, 3>& fval,
                               const std::array<double, 3>& fprime, double gap_tol) {
  SymTensor4 out;
  const Eigen::Matrix3d& q = s.vectors;
  // eigenprojector contributions
  for (int i = 0; i < 3; ++i) {
    const Eigen::Matrix3d ei = q.col(i) * q.col(i).transpose();
    const Vec6 v = SymTensor2::from_matrix(ei).mandel();
    out.m += fprime[i] * (v * v.transpose());
  }
  // mixed (divided-difference) contributions
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double d = divided_difference1(fval[i], fval[j], fprime[i], fprime[j], s.lambda[i],
                                           s.lambda[j], gap_tol);
      Eigen::Matrix3d sij = q.col(i) * q.col(j).transpose() + q.col(j) * q.col(i).transpose();
      sij *= 1.0 / std::sqrt(2.0);
      const Vec6 v = SymTensor2::from_matrix(sij).mandel();
      out.m += d * (v * v.transpose());
    }
  }
  return out;
}

SymTensor4 spectral_dderiv_contract(const Spectrum& s, const SymTensor2& v,
                                    const std::array<double, 3>& fval,
                                    const std::array<double, 3>& fprime,
                                    const std::array<double, 3>& fsecond, double gap_tol) {
  KernelSamples k{s.lambda, fval, fprime, fsecond};
  const Eigen::Matrix3d& q = s.vectors;
  const Eigen::Matrix3d vhat = q.transpose() * v.matrix() * q;

  double dd2[3][3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int m = 0; m < 3; ++m)
        dd2[i][j][m] = divided_difference2(k, i, j, m, gap_tol);

  SymTensor4 out;
  for (int beta = 0; beta < 6; ++beta) {
    const Eigen::Matrix3d hhat = q.transpose() * mandel_basis()[beta].matrix() * q;
    Eigen::Matrix3d dw = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        double acc = 0;
        for (int m = 0; m < 3; ++m)
          acc += dd2[i][m][j] * (hhat(i, m) * vhat(m, j) + vhat(i, m) * hhat(m, j));
        dw(i, j) = acc;
        dw(j, i) = acc;
      }
    }
    out.m.col(beta) = SymTensor2::from_matrix(q * dw * q.transpose()).mandel();
  }
  return out;
}

std::pair<SymTensor2, SymTensor4> tensor_log_strain(const SymTensor2& c) {
  const Spectrum s = spectral_decompose(c);
  if (s.lambda[2] <= 1e-14 * std::max(1.0, std::abs(s.lambda[0])))
    throw NonPositiveDefinite("tensor_log_strain: non-positive eigenvalue of C");
  std::array<double, 3> fv, fp;
  for (int i = 0; i < 3; ++i) {
    fv[i] = std::log(s.lambda[i]);
    fp[i] = 1.0 / s.lambda[i];
  }
  const SymTensor2 eta = s.recompose({0.5 * fv[0], 0.5 * fv[1], 0.5 * fv[2]});
  return {eta, spectral_derivative(s, fv, fp, s.gap_tolerance())};
}

SymTensor2 positive_part(const SymTensor2& y) {
  const Spectrum s = spectral_decompose(y);
  return s.recompose({std::max(s.lambda[0], 0.0), std::max(s.lambda[1], 0.0),
                      std::max(s.lambda[2], 0.0)});
}

std::pair<SymTensor2, SymTensor4> positive_part_with_projection(const SymTensor2& y) {
  const Spectrum s = spectral_decompose(y);
  std::array<double, 3> fv, fp;
  for (int i = 0; i < 3; ++i) {
    fv[i] = std::max(s.lambda[i], 0.0);
    fp[i] = s.lambda[i] > 0.0 ? 1.0 : 0.0;
  }
  return {s.recompose(fv), spectral_derivative(s, fv, fp, s.gap_tolerance())};
}

SymTensor4 positive_part_dderiv_contract(const SymTensor2& y, const SymTensor2& v) {
  const Spectrum s = spectral_decompose(y);
  std::array<double, 3> fv, fp, fpp;
  for (int i = 0; i < 3; ++i) {
    fv[i] = std::max(s.lambda[i], 0.0);
    fp[i] = s.lambda[i] > 0.0 ? 1.0 : 0.0;
    fpp[i] = 0.0;
  }
  return spectral_dderiv_contract(s, v, fv, fp, fpp, s.gap_tolerance());
}

SymTensor4 log_dderiv_contract(const SymTensor2& c, const SymTensor2& v) {
  const Spectrum s = spectral_decompose(c);
  if (s.lambda[2] <= 0.0)
    throw NonPositiveDefinite("log_dderiv_contract: non-positive eigenvalue");
  std::array<double, 3> fv, fp, fpp;
  for (int i = 0; i < 3; ++i) {
    fv[i] = std::log(s.lambda[i]);
    fp[i] = 1.0 / s.lambda[i];
    fpp[i] = -1.0 / (s.lambda[i] * s.lambda[i]);
  }
  return spectral_dderiv_contract(s, v, fv, fp, fpp, s.gap_tolerance());
}

SymTensor4 t23_dyadic(const SymTensor2& a, const SymTensor2& b) {
  const Eigen::Matrix3d am = a.matrix();
  const Eigen::Matrix3d bm = b.matrix();
  SymTensor4 out;
  for (int beta = 0; beta < 6; ++beta) {
    const Eigen::Matrix3d t = am * mandel_basis()[beta].matrix() * bm;
    out.m.col(beta) = SymTensor2::from_matrix(t).mandel();
  }
  return out;
}

SymTensor2 tensor_exp(const SymTensor2& a) {
  return isotropic_function_value(a, [](double x) { return std::exp(x); });
}

}  // namespace mdam
