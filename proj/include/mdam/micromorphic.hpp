#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "mdam/tensor.hpp"

namespace mdam {

enum class VariantTag { A, B, C, Local };

/// Fixed-capacity micromorphic tuple; `n` entries are valid.
using DbarTuple = std::array<double, 6>;

/// Gradient-extension selector: which damage-tensor invariants get a nonlocal
/// counterpart. A regularizes all six components through structural tensors,
/// B the three principal traces, C the volumetric/deviatoric split. Local
/// disables the extension entirely (no nonlocal fields).
struct MicromorphicVariant {
  VariantTag tag = VariantTag::B;
  int n_dbar = 3;
  // model A only: symmetrized structural tensors sym(M_1..6)
  std::array<SymTensor2, 6> structural{};

  static MicromorphicVariant make(VariantTag tag);
  static MicromorphicVariant from_string(std::string_view name);
  std::string name() const;
};

/// Tuple values d(D).
DbarTuple tuple_value(const MicromorphicVariant& v, const SymTensor2& d);

/// Tuple derivatives dd_i/dD.
std::array<SymTensor2, 6> tuple_derivative(const MicromorphicVariant& v, const SymTensor2& d);

/// Second derivatives d^2 d_i / dD^2.
std::array<SymTensor4, 6> tuple_second_derivative(const MicromorphicVariant& v,
                                                  const SymTensor2& d);

/// Y_dbar = sum_i H_i (d_i - dbar_i) dd_i/dD.
SymTensor2 nonlocal_force(const MicromorphicVariant& v, const SymTensor2& d, const DbarTuple& dbar,
                          const std::vector<double>& h);

/// dY_dbar/dD = sum_i H_i [ (dd_i/dD)(x)(dd_i/dD) + (d_i - dbar_i) d^2 d_i/dD^2 ].
SymTensor4 nonlocal_force_derivative(const MicromorphicVariant& v, const SymTensor2& d,
                                     const DbarTuple& dbar, const std::vector<double>& h);

struct PointForces {
  DbarTuple xi{};                          // H_k (dbar_k - d_k)
  std::array<Eigen::Vector3d, 6> gradflux{};  // A_k grad dbar_k
};

PointForces micromorphic_point_forces(const MicromorphicVariant& v, const SymTensor2& d,
                                      const DbarTuple& dbar,
                                      const std::array<Eigen::Vector3d, 6>& grad_dbar,
                                      const std::vector<double>& h, const std::vector<double>& a);

/// Penalty + gradient energy, used by tests and energy accounting.
double psi_dbar(const MicromorphicVariant& v, const SymTensor2& d, const DbarTuple& dbar,
                const std::array<Eigen::Vector3d, 6>& grad_dbar, const std::vector<double>& h,
                const std::vector<double>& a);

}  // namespace mdam
