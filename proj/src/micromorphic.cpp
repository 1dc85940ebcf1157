#include "mdam/micromorphic.hpp"

#include "mdam/errors.hpp"

namespace mdam {

namespace {

void check_sizes(const MicromorphicVariant& v, const std::vector<double>& h) {
  if (static_cast<int>(h.size()) != v.n_dbar)
    throw ConfigError("micromorphic: modulus list size does not match tuple size");
}

}  // namespace

MicromorphicVariant MicromorphicVariant::make(VariantTag tag) {
  MicromorphicVariant v;
  v.tag = tag;
  switch (tag) {
    case VariantTag::A: {
      v.n_dbar = 6;
      // sym(e_i (x) e_j) for the Cartesian dyads
      v.structural[0] = {1, 0, 0, 0, 0, 0};
      v.structural[1] = {0, 1, 0, 0, 0, 0};
      v.structural[2] = {0, 0, 1, 0, 0, 0};
      v.structural[3] = {0, 0, 0, 0.5, 0, 0};
      v.structural[4] = {0, 0, 0, 0, 0.5, 0};
      v.structural[5] = {0, 0, 0, 0, 0, 0.5};
      break;
    }
    case VariantTag::B:
      v.n_dbar = 3;
      break;
    case VariantTag::C:
      v.n_dbar = 2;
      break;
    case VariantTag::Local:
      v.n_dbar = 0;
      break;
  }
  return v;
}

MicromorphicVariant MicromorphicVariant::from_string(std::string_view name) {
  if (name == "A" || name == "a")
    return make(VariantTag::A);
  if (name == "B" || name == "b")
    return make(VariantTag::B);
  if (name == "C" || name == "c")
    return make(VariantTag::C);
  if (name == "local")
    return make(VariantTag::Local);
  throw ConfigError("unknown micromorphic variant '" + std::string(name) +
                    "' (expected A, B, C, or local)");
}

std::string MicromorphicVariant::name() const {
  switch (tag) {
    case VariantTag::A:
      return "A";
    case VariantTag::B:
      return "B";
    case VariantTag::C:
      return "C";
    case VariantTag::Local:
      return "local";
  }
  return "?";
}

DbarTuple tuple_value(const MicromorphicVariant& v, const SymTensor2& d) {
  DbarTuple out{};
  switch (v.tag) {
    case VariantTag::A:
      for (int i = 0; i < 6; ++i)
        out[i] = d.double_dot(v.structural[i]);
      break;
    case VariantTag::B: {
      const SymTensor2 d2 = sym_product(d, d);
      out[0] = d.trace();
      out[1] = d2.trace();
      out[2] = sym_product(d2, d).trace();
      break;
    }
    case VariantTag::C: {
      const SymTensor2 dd = d.deviator();
      out[0] = d.trace() / 3.0;
      out[1] = dd.double_dot(dd);
      break;
    }
    case VariantTag::Local:
      break;
  }
  return out;
}

std::array<SymTensor2, 6> tuple_derivative(const MicromorphicVariant& v, const SymTensor2& d) {
  std::array<SymTensor2, 6> out{};
  switch (v.tag) {
    case VariantTag::A:
      out = v.structural;
      break;
    case VariantTag::B:
      out[0] = SymTensor2::identity();
      out[1] = d * 2.0;
      out[2] = sym_product(d, d) * 3.0;
      break;
    case VariantTag::C:
      out[0] = SymTensor2::identity() * (1.0 / 3.0);
      out[1] = d.deviator() * 2.0;
      break;
    case VariantTag::Local:
      break;
  }
  return out;
}

std::array<SymTensor4, 6> tuple_second_derivative(const MicromorphicVariant& v,
                                                  const SymTensor2& d) {
  std::array<SymTensor4, 6> out{};
  switch (v.tag) {
    case VariantTag::A:
    case VariantTag::Local:
      break;
    case VariantTag::B:
      out[1] = SymTensor4::identity() * 2.0;
      out[2] = (t23_dyadic(d, SymTensor2::identity()) + t23_dyadic(SymTensor2::identity(), d)) *
               3.0;
      break;
    case VariantTag::C:
      out[1] = SymTensor4::deviatoric_projector() * 2.0;
      break;
  }
  return out;
}

SymTensor2 nonlocal_force(const MicromorphicVariant& v, const SymTensor2& d, const DbarTuple& dbar,
                          const std::vector<double>& h) {
  check_sizes(v, h);
  const DbarTuple val = tuple_value(v, d);
  const auto der = tuple_derivative(v, d);
  SymTensor2 out;
  for (int i = 0; i < v.n_dbar; ++i)
    out += der[i] * (h[i] * (val[i] - dbar[i]));
  return out;
}

SymTensor4 nonlocal_force_derivative(const MicromorphicVariant& v, const SymTensor2& d,
                                     const DbarTuple& dbar, const std::vector<double>& h) {
  check_sizes(v, h);
  const DbarTuple val = tuple_value(v, d);
  const auto der = tuple_derivative(v, d);
  const auto der2 = tuple_second_derivative(v, d);
  SymTensor4 out;
  for (int i = 0; i < v.n_dbar; ++i) {
    out += SymTensor4::outer(der[i], der[i]) * h[i];
    out += der2[i] * (h[i] * (val[i] - dbar[i]));
  }
  return out;
}

PointForces micromorphic_point_forces(const MicromorphicVariant& v, const SymTensor2& d,
                                      const DbarTuple& dbar,
                                      const std::array<Eigen::Vector3d, 6>& grad_dbar,
                                      const std::vector<double>& h, const std::vector<double>& a) {
  check_sizes(v, h);
  check_sizes(v, a);
  const DbarTuple val = tuple_value(v, d);
  PointForces out;
  for (int k = 0; k < v.n_dbar; ++k) {
    out.xi[k] = h[k] * (dbar[k] - val[k]);
    out.gradflux[k] = a[k] * grad_dbar[k];
  }
  return out;
}

double psi_dbar(const MicromorphicVariant& v, const SymTensor2& d, const DbarTuple& dbar,
                const std::array<Eigen::Vector3d, 6>& grad_dbar, const std::vector<double>& h,
                const std::vector<double>& a) {
  check_sizes(v, h);
  check_sizes(v, a);
  const DbarTuple val = tuple_value(v, d);
  double psi = 0;
  for (int k = 0; k < v.n_dbar; ++k) {
    const double diff = val[k] - dbar[k];
    psi += 0.5 * h[k] * diff * diff + 0.5 * a[k] * grad_dbar[k].squaredNorm();
  }
  return psi;
}

}  // namespace mdam
