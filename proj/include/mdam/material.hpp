#pragma once

#include <vector>

#include "mdam/micromorphic.hpp"
#include "mdam/tensor.hpp"

namespace mdam {

struct MaterialParams {
  double mu = 55000.0;        // shear modulus [MPa]
  double K = 185000.0 / 3.0;  // bulk modulus [MPa]
  double theta = 1.0;         // damage anisotropy degree
  double e_d = 1.0;           // degradation exponent
  double Y0 = 2.5;            // initial damage threshold [MPa]
  double c_d = 1.0;           // distortional hardening exponent
  double H_d = 1.0;           // linear isotropic hardening [MPa]
  double r_d = 5.0;           // nonlinear isotropic hardening [MPa]
  double s_d = 100.0;         // nonlinear isotropic hardening scaling
  double K_h = 0.1;           // kinematic hardening prefactor [MPa]
  double n_h = 2.0;           // kinematic hardening exponent
  double a_h = 0.999999;      // Taylor sampling point for the barrier kernel
  double eta_v = 1.0;         // artificial viscosity [MPa s]
  MicromorphicVariant variant = MicromorphicVariant::make(VariantTag::B);
  std::vector<double> H_pen = {1e4, 1e4, 1e4};   // penalty moduli [MPa]
  std::vector<double> A_len = {75.0, 75.0, 75.0};  // length-scale moduli [MPa mm^2]

  void set_variant(const MicromorphicVariant& v, double h_uniform, double a_uniform);
  void validate() const;  // throws ConfigError on bound violations
};

/// Converged internal variables at one quadrature point.
struct GaussPointState {
  SymTensor2 D;
  double xi_d = 0.0;
  double dissipation_increment = 0.0;  // per committed step [MPa]
};

enum class TangentMode { Analytic, FiniteDifference };

struct LocalUpdateResult {
  GaussPointState state;
  SymTensor2 alpha;          // stress conjugate to eta [MPa]
  DbarTuple d_local{};       // micromorphic tuple at the new state
  SymTensor4 dalpha_deta;    // consistent d alpha / d eta
  std::array<SymTensor2, 6> dalpha_ddbar{};
  std::array<SymTensor2, 6> ddlocal_deta{};
  Mat66 ddlocal_ddbar = Mat66::Zero();  // n x n block valid
  double delta_gamma = 0.0;
  int iterations = 0;
  bool elastic = true;
  double consistency_residual = 0.0;  // Phi - eta_v dgamma/dt at exit [MPa]
};

/// f_d = (1 - tr D / 3)^e_d
double degradation_factor(const SymTensor2& d, double e_d);

struct ElasticForces {
  double psi;        // [MPa]
  SymTensor2 alpha;  // d psi_e / d eta
  SymTensor2 Y;      // -d psi_e / d D
};

ElasticForces elastic_energy_and_forces(const SymTensor2& eta, const SymTensor2& d,
                                        const MaterialParams& p);

/// R_d = -(r_d (1 - exp(-s_d xi)) + H_d xi), non-positive and non-increasing.
double isotropic_hardening_force(double xi_d, const MaterialParams& p);
double isotropic_hardening_energy(double xi_d, const MaterialParams& p);

/// Y_h = d psi_h / d D, spectral barrier keeping damage eigenvalues below one.
SymTensor2 kinematic_hardening_force(const SymTensor2& d, const MaterialParams& p);
double kinematic_hardening_energy(const SymTensor2& d, const MaterialParams& p);

/// A = ((I-D)^c_d (x) (I-D)^c_d)^T23
SymTensor4 interaction_tensor(const SymTensor2& d, double c_d);

/// Phi_d = sqrt(3) sqrt(Y+ : A : Y+) - (Y0 - R_d)
double damage_criterion(const SymTensor2& y, double r_d, const SymTensor2& d,
                        const MaterialParams& p);

/// N = 3/(Y0 - R_d) P+ : (A : Y+)
SymTensor2 flow_direction(const SymTensor2& y, double r_d, const SymTensor2& d,
                          const MaterialParams& p);

/// Backward-Euler step of the viscously regularized damage evolution with
/// consistent tangents by implicit differentiation of the converged system.
LocalUpdateResult local_update(const SymTensor2& eta_new, const DbarTuple& dbar_new,
                               const GaussPointState& state_old, double dt,
                               const MaterialParams& p,
                               TangentMode mode = TangentMode::Analytic);

/// S = alpha : P with P = d(ln C)/dC.
SymTensor2 stress_and_projection(const SymTensor2& alpha, const SymTensor2& c);

/// d alpha_e / d eta at frozen damage (Hencky tangent of the degraded law).
SymTensor4 elastic_tangent(const SymTensor2& eta, const SymTensor2& d, const MaterialParams& p);

/// d Y_e / d eta, the elastic-force coupling block (equals -(d alpha_e/d D)^T).
SymTensor4 elastic_force_strain_derivative(const SymTensor2& eta, const SymTensor2& d,
                                           const MaterialParams& p);

}  // namespace mdam
