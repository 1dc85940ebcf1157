#include <doctest.h>

#include "mdam/errors.hpp"
#include "mdam/micromorphic.hpp"
#include "test_support.hpp"

using namespace mdam;
using namespace mdam::testing;

namespace {

std::vector<double> uniform_moduli(const MicromorphicVariant& v, double value) {
  return std::vector<double>(v.n_dbar, value);
}

std::array<Eigen::Vector3d, 6> zero_grads() {
  std::array<Eigen::Vector3d, 6> g;
  for (auto& x : g)
    x.setZero();
  return g;
}

}  // namespace

TEST_CASE("tuple values at reference damage states") {
  for (auto tag : {VariantTag::A, VariantTag::B, VariantTag::C}) {
    const auto v = MicromorphicVariant::make(tag);
    const DbarTuple z = tuple_value(v, SymTensor2{});
    for (int i = 0; i < v.n_dbar; ++i)
      CHECK(z[i] == 0.0);
  }

  const auto vb = MicromorphicVariant::make(VariantTag::B);
  const DbarTuple tb = tuple_value(vb, SymTensor2::identity());
  CHECK(tb[0] == doctest::Approx(3));
  CHECK(tb[1] == doctest::Approx(3));
  CHECK(tb[2] == doctest::Approx(3));

  const auto vc = MicromorphicVariant::make(VariantTag::C);
  const DbarTuple tc = tuple_value(vc, SymTensor2::identity());
  CHECK(tc[0] == doctest::Approx(1));
  CHECK(std::abs(tc[1]) < 1e-15);

  const DbarTuple tc2 = tuple_value(vc, SymTensor2{0.6, 0, 0, 0, 0, 0});
  CHECK(tc2[0] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(tc2[1] == doctest::Approx(0.24).epsilon(1e-14));
}

TEST_CASE("model A structural tensors pick out the Cartesian components") {
  const auto v = MicromorphicVariant::make(VariantTag::A);
  const SymTensor2 d = random_sym(0.4);
  const DbarTuple t = tuple_value(v, d);
  CHECK(t[0] == doctest::Approx(d.xx).epsilon(1e-14));
  CHECK(t[1] == doctest::Approx(d.yy).epsilon(1e-14));
  CHECK(t[2] == doctest::Approx(d.zz).epsilon(1e-14));
  CHECK(t[3] == doctest::Approx(d.xy).epsilon(1e-14));
  CHECK(t[4] == doctest::Approx(d.xz).epsilon(1e-14));
  CHECK(t[5] == doctest::Approx(d.yz).epsilon(1e-14));
}

TEST_CASE("tuple derivative special values") {
  const auto vb = MicromorphicVariant::make(VariantTag::B);
  const auto db = tuple_derivative(vb, SymTensor2{});
  CHECK(rel_err(db[0], SymTensor2::identity()) < 1e-15);
  CHECK(db[1].norm() < 1e-15);
  CHECK(db[2].norm() < 1e-15);

  const auto vc = MicromorphicVariant::make(VariantTag::C);
  const auto dc = tuple_derivative(vc, SymTensor2::identity() * 0.37);
  CHECK(dc[1].norm() < 1e-15);
}

TEST_CASE("tuple derivatives match finite differences for all variants") {
  for (auto tag : {VariantTag::A, VariantTag::B, VariantTag::C}) {
    const auto v = MicromorphicVariant::make(tag);
    for (int trial = 0; trial < 50; ++trial) {
      const SymTensor2 d = random_sym(0.5);
      const auto der = tuple_derivative(v, d);
      for (int i = 0; i < v.n_dbar; ++i) {
        const SymTensor2 fd = fd_scalar_gradient(
            [&](const SymTensor2& x) { return tuple_value(v, x)[i]; }, d, 1e-6);
        CHECK((der[i] - fd).norm() < 1e-7 * std::max(1.0, fd.norm()));
      }
    }
  }
}

TEST_CASE("tuple second derivatives match finite differences") {
  for (auto tag : {VariantTag::A, VariantTag::B, VariantTag::C}) {
    const auto v = MicromorphicVariant::make(tag);
    for (int trial = 0; trial < 20; ++trial) {
      const SymTensor2 d = random_sym(0.5);
      const auto der2 = tuple_second_derivative(v, d);
      for (int i = 0; i < v.n_dbar; ++i) {
        const SymTensor4 fd = fd_tensor_derivative(
            [&](const SymTensor2& x) { return tuple_derivative(v, x)[i]; }, d, 1e-6);
        CHECK((der2[i].m - fd.m).norm() < 1e-6 * std::max(1.0, fd.m.norm()));
      }
    }
  }
}

TEST_CASE("nonlocal force vanishes when the nonlocal tuple matches the local one") {
  for (auto tag : {VariantTag::A, VariantTag::B, VariantTag::C}) {
    const auto v = MicromorphicVariant::make(tag);
    const SymTensor2 d = random_sym(0.4);
    const DbarTuple dbar = tuple_value(v, d);
    CHECK(nonlocal_force(v, d, dbar, uniform_moduli(v, 1e4)).norm() < 1e-9);
  }
}

TEST_CASE("nonlocal force for model B at zero damage") {
  const auto v = MicromorphicVariant::make(VariantTag::B);
  DbarTuple dbar{};
  dbar[0] = 0.3;
  const SymTensor2 y = nonlocal_force(v, SymTensor2{}, dbar, uniform_moduli(v, 2.0));
  // only the tr D term survives: -H1 * b * I
  CHECK(rel_err(y, SymTensor2::identity() * (-2.0 * 0.3)) < 1e-14);
}

TEST_CASE("nonlocal force equals the damage-gradient of the penalty energy") {
  for (auto tag : {VariantTag::A, VariantTag::B, VariantTag::C}) {
    const auto v = MicromorphicVariant::make(tag);
    const auto h = uniform_moduli(v, 1e4);
    const auto a = uniform_moduli(v, 75.0);
    for (int trial = 0; trial < 50; ++trial) {
      const SymTensor2 d = random_sym(0.4);
      DbarTuple dbar{};
      for (int k = 0; k < v.n_dbar; ++k)
        dbar[k] = uniform(-0.5, 0.5);
      const SymTensor2 got = nonlocal_force(v, d, dbar, h);
      const SymTensor2 fd = fd_scalar_gradient(
          [&](const SymTensor2& x) { return psi_dbar(v, x, dbar, zero_grads(), h, a); }, d, 1e-7);
      CHECK((got - fd).norm() < 1e-7 * std::max(1.0, fd.norm()));
    }
  }
}

TEST_CASE("nonlocal force derivative matches finite differences") {
  for (auto tag : {VariantTag::A, VariantTag::B, VariantTag::C}) {
    const auto v = MicromorphicVariant::make(tag);
    const auto h = uniform_moduli(v, 1e4);
    for (int trial = 0; trial < 20; ++trial) {
      const SymTensor2 d = random_sym(0.4);
      DbarTuple dbar{};
      for (int k = 0; k < v.n_dbar; ++k)
        dbar[k] = uniform(-0.5, 0.5);
      const SymTensor4 got = nonlocal_force_derivative(v, d, dbar, h);
      const SymTensor4 fd = fd_tensor_derivative(
          [&](const SymTensor2& x) { return nonlocal_force(v, x, dbar, h); }, d, 1e-6);
      CHECK((got.m - fd.m).norm() < 1e-6 * std::max(1.0, fd.m.norm()));
    }
  }
}

TEST_CASE("point forces follow the state laws") {
  const auto v = MicromorphicVariant::make(VariantTag::B);
  const auto h = uniform_moduli(v, 1e4);
  const auto a = uniform_moduli(v, 75.0);

  // d = dbar, zero gradients: everything vanishes
  const SymTensor2 d = random_sym(0.3);
  const DbarTuple matched = tuple_value(v, d);
  const PointForces zero = micromorphic_point_forces(v, d, matched, zero_grads(), h, a);
  for (int k = 0; k < v.n_dbar; ++k) {
    CHECK(std::abs(zero.xi[k]) < 1e-9);
    CHECK(zero.gradflux[k].norm() < 1e-12);
  }

  // mismatch 1e-3 with H = 1e4 MPa gives 10 MPa
  DbarTuple offset = matched;
  offset[1] += 1e-3;
  const PointForces pf = micromorphic_point_forces(v, d, offset, zero_grads(), h, a);
  CHECK(pf.xi[1] == doctest::Approx(10.0).epsilon(1e-10));

  // gradient flux: unit gradient with A = 75 MPa mm^2
  auto grads = zero_grads();
  grads[0] = Eigen::Vector3d(1, 0, 0);
  const PointForces pg = micromorphic_point_forces(v, d, matched, grads, h, a);
  CHECK(pg.gradflux[0][0] == doctest::Approx(75.0));
  CHECK(std::abs(pg.gradflux[0][1]) < 1e-15);
}

TEST_CASE("size mismatch is a configuration error") {
  const auto v = MicromorphicVariant::make(VariantTag::C);
  CHECK_THROWS_AS(nonlocal_force(v, SymTensor2{}, DbarTuple{}, {1e4, 1e4, 1e4}), ConfigError);
}

TEST_CASE("variants B and C are isotropic; A is frame-anchored") {
  for (int trial = 0; trial < 50; ++trial) {
    const SymTensor2 d = random_sym(0.5);
    const Eigen::Matrix3d q = random_rotation();
    const SymTensor2 dr = rotate(d, q);
    for (auto tag : {VariantTag::B, VariantTag::C}) {
      const auto v = MicromorphicVariant::make(tag);
      const DbarTuple t0 = tuple_value(v, d);
      const DbarTuple t1 = tuple_value(v, dr);
      for (int i = 0; i < v.n_dbar; ++i)
        CHECK(std::abs(t0[i] - t1[i]) < 1e-12 * std::max(1.0, std::abs(t0[i])));
    }
  }
  // model A with the default Cartesian tensors is not rotation invariant
  const auto va = MicromorphicVariant::make(VariantTag::A);
  const SymTensor2 d{0.5, 0.1, 0.0, 0.2, 0.0, 0.0};
  Eigen::Matrix3d q;
  q = Eigen::AngleAxisd(0.7, Eigen::Vector3d::UnitZ());
  const DbarTuple t0 = tuple_value(va, d);
  const DbarTuple t1 = tuple_value(va, rotate(d, q));
  double diff = 0;
  for (int i = 0; i < 6; ++i)
    diff += std::abs(t0[i] - t1[i]);
  CHECK(diff > 1e-3);
}

TEST_CASE("variant C degeneracy: isotropic damage leaves the deviatoric entry at zero") {
  const auto v = MicromorphicVariant::make(VariantTag::C);
  for (double scale : {0.0, 0.1, 0.5, 0.9}) {
    const DbarTuple t = tuple_value(v, SymTensor2::identity() * scale);
    CHECK(std::abs(t[1]) < 1e-15);
  }
}
