#include "mdam/material.hpp"

#include <algorithm>
#include <cmath>

#include "mdam/errors.hpp"

namespace mdam {

void MaterialParams::set_variant(const MicromorphicVariant& v, double h_uniform,
                                 double a_uniform) {
  variant = v;
  H_pen.assign(v.n_dbar, h_uniform);
  A_len.assign(v.n_dbar, a_uniform);
}

void MaterialParams::validate() const {
  if (!(mu > 0) || !(K > 0) || !(Y0 > 0) || !(eta_v > 0))
    throw ConfigError("material: mu, K, Y0, eta_v must be positive");
  if (!(s_d > 0))
    throw ConfigError("material: s_d must be positive");
  if (!(n_h > 1))
    throw ConfigError("material: n_h must exceed one");
  if (!(a_h > 0 && a_h < 1))
    throw ConfigError("material: a_h must lie in (0,1)");
  if (static_cast<int>(H_pen.size()) != variant.n_dbar ||
      static_cast<int>(A_len.size()) != variant.n_dbar)
    throw ConfigError("material: penalty/length-scale lists must match the tuple size");
  for (double h : H_pen)
    if (!(h > 0))
      throw ConfigError("material: penalty moduli must be positive");
  for (double a : A_len)
    if (!(a >= 0))
      throw ConfigError("material: length-scale moduli must be non-negative");
}

double degradation_factor(const SymTensor2& d, double e_d) {
  const double x = 1.0 - d.trace() / 3.0;
  if (!(x > 0))
    throw StateOutOfRange("degradation_factor: tr D reached 3");
  return std::pow(x, e_d);
}

ElasticForces elastic_energy_and_forces(const SymTensor2& eta, const SymTensor2& d,
                                        const MaterialParams& p) {
  const double fd = degradation_factor(d, p.e_d);
  const SymTensor2 m = SymTensor2::identity() - d;
  const SymTensor2 e = eta.deviator();
  const SymTensor2 e2 = sym_product(e, e);
  const double t = eta.trace();
  const double tre2 = e2.trace();

  ElasticForces out;
  out.psi = p.mu * p.theta * e2.double_dot(m) + fd * p.mu * (1.0 - p.theta) * tre2 +
            fd * 0.5 * p.K * t * t;
  out.alpha = deviator(sym_product(m, e) * 2.0) * (p.mu * p.theta) +
              e * (2.0 * p.mu * (1.0 - p.theta) * fd) + SymTensor2::identity() * (fd * p.K * t);
  const double coef = (p.e_d / 3.0) * std::pow(1.0 - d.trace() / 3.0, p.e_d - 1.0) *
                      (p.mu * (1.0 - p.theta) * tre2 + 0.5 * p.K * t * t);
  out.Y = e2 * (p.mu * p.theta) + SymTensor2::identity() * coef;
  return out;
}

double isotropic_hardening_force(double xi_d, const MaterialParams& p) {
  return -(p.r_d * (1.0 - std::exp(-p.s_d * xi_d)) + p.H_d * xi_d);
}

double isotropic_hardening_energy(double xi_d, const MaterialParams& p) {
  return p.r_d * (xi_d + (std::exp(-p.s_d * xi_d) - 1.0) / p.s_d) + 0.5 * p.H_d * xi_d * xi_d;
}

namespace {

double hardening_force_slope(double xi_d, const MaterialParams& p) {
  return -(p.r_d * p.s_d * std::exp(-p.s_d * xi_d) + p.H_d);
}

// Scalar barrier kernel (1-x)^(-1/n_h), continued past a_h by its
// second-order Taylor expansion so the force stays finite and smooth.
struct BarrierKernel {
  double q, a, ga, gpa, gppa;

  explicit BarrierKernel(const MaterialParams& p) : q(1.0 / p.n_h), a(p.a_h) {
    const double base = 1.0 - a;
    ga = std::pow(base, -q);
    gpa = q * std::pow(base, -q - 1.0);
    gppa = q * (q + 1.0) * std::pow(base, -q - 2.0);
  }

  double g(double x) const {
    if (x <= a)
      return std::pow(1.0 - x, -q);
    const double dx = x - a;
    return ga + gpa * dx + 0.5 * gppa * dx * dx;
  }
  double gp(double x) const {
    if (x <= a)
      return q * std::pow(1.0 - x, -q - 1.0);
    return gpa + gppa * (x - a);
  }
  double gpp(double x) const {
    if (x <= a)
      return q * (q + 1.0) * std::pow(1.0 - x, -q - 2.0);
    return gppa;
  }
  // antiderivative of g - 1 vanishing at x = 0
  double energy(double x) const {
    const double pexp = 1.0 - q;
    auto h_smooth = [&](double y) {
      return -std::pow(1.0 - y, pexp) / pexp - y + 1.0 / pexp;
    };
    if (x <= a)
      return h_smooth(x);
    const double dx = x - a;
    return h_smooth(a) + (ga - 1.0) * dx + 0.5 * gpa * dx * dx + gppa * dx * dx * dx / 6.0;
  }
};

std::pair<SymTensor2, SymTensor4> barrier_force_with_derivative(const SymTensor2& d,
                                                                const MaterialParams& p) {
  const BarrierKernel k(p);
  return isotropic_function(
      d, [&](double x) { return p.K_h * (k.g(x) - 1.0); },
      [&](double x) { return p.K_h * k.gp(x); });
}

// (I-D)^c_d together with its derivative w.r.t. M = I-D.
std::pair<SymTensor2, SymTensor4> power_with_derivative(const SymTensor2& m, double c) {
  if (c == 1.0)
    return {m, SymTensor4::identity()};
  return isotropic_function(
      m, [c](double x) { return std::pow(x, c); },
      [c](double x) { return c * std::pow(x, c - 1.0); });
}

double max_eigenvalue(const SymTensor2& d) { return spectral_decompose(d).lambda[0]; }

void check_damage_admissible(const SymTensor2& d, const char* who) {
  if (max_eigenvalue(d) >= 1.0)
    throw StateOutOfRange(std::string(who) + ": damage eigenvalue reached one");
}

// Everything the viscous consistency system needs at a trial point
// (D, dgamma), shared between residual and Jacobian assembly.
struct LocalEval {
  // frozen inputs
  const MaterialParams& p;
  const SymTensor2& eta;
  const DbarTuple& dbar;
  const GaussPointState& old;
  double dt;
  SymTensor2 e, e2;
  double treta = 0, tre2 = 0;

  // iterate
  SymTensor2 D;
  double dgamma = 0;

  // derived quantities
  double xi = 0, Rd = 0, Rdp = 0;
  SymTensor2 Ye, Yh, Ydb, Y;
  SymTensor4 dYh;
  SymTensor2 G;
  SymTensor4 Lpow;
  SymTensor2 Yp;
  SymTensor4 Pplus;
  SymTensor2 AYp;
  double s = 0, phi = 0;
  SymTensor2 N;
  std::array<SymTensor2, 6> T{};  // tuple derivatives at D
  Eigen::Matrix<double, 7, 1> r;
  bool ok = false;

  LocalEval(const MaterialParams& p_, const SymTensor2& eta_, const DbarTuple& dbar_,
            const GaussPointState& old_, double dt_)
      : p(p_), eta(eta_), dbar(dbar_), old(old_), dt(dt_) {
    e = eta.deviator();
    e2 = sym_product(e, e);
    treta = eta.trace();
    tre2 = e2.trace();
  }

  SymTensor2 elastic_force(const SymTensor2& dmg) const {
    const double coef = (p.e_d / 3.0) * std::pow(1.0 - dmg.trace() / 3.0, p.e_d - 1.0) *
                        (p.mu * (1.0 - p.theta) * tre2 + 0.5 * p.K * treta * treta);
    return e2 * (p.mu * p.theta) + SymTensor2::identity() * coef;
  }

  bool evaluate(const SymTensor2& dmg, double dg) {
    try {
      return evaluate_impl(dmg, dg);
    } catch (const DomainError&) {
      ok = false;
      return false;  // backtracking handles out-of-domain iterates
    }
  }

  bool evaluate_impl(const SymTensor2& dmg, double dg) {
    D = dmg;
    dgamma = dg;
    ok = false;
    if (!D.finite() || !std::isfinite(dgamma))
      return false;

    xi = old.xi_d + dgamma;
    Rd = isotropic_hardening_force(xi, p);
    Rdp = hardening_force_slope(xi, p);

    Ye = elastic_force(D);
    auto [yh, dyh] = barrier_force_with_derivative(D, p);
    Yh = yh;
    dYh = dyh;
    Ydb = nonlocal_force(p.variant, D, dbar, p.H_pen);
    T = tuple_derivative(p.variant, D);
    Y = Ye - Yh - Ydb;
    if (!Y.finite())
      return false;

    auto [g, lp] = power_with_derivative(SymTensor2::identity() - D, p.c_d);
    G = g;
    Lpow = lp;
    auto [yp, pp] = positive_part_with_projection(Y);
    Yp = yp;
    Pplus = pp;
    AYp = SymTensor2::from_matrix(G.matrix() * Yp.matrix() * G.matrix());
    const double s2 = std::max(0.0, Yp.double_dot(AYp));
    s = std::sqrt(s2);
    phi = std::sqrt(3.0) * s - (p.Y0 - Rd);
    N = (s > 0) ? Pplus.apply(AYp) * (3.0 / (p.Y0 - Rd)) : SymTensor2{};

    const SymTensor2 rd_tensor = D - old.D - N * dgamma;
    r.head<6>() = rd_tensor.mandel();
    r[6] = phi - p.eta_v * dgamma / dt;
    ok = r.allFinite();
    return ok;
  }

  double scaled_residual() const {
    return std::max(r.head<6>().lpNorm<Eigen::Infinity>(), std::abs(r[6]) / p.Y0);
  }

  SymTensor2 criterion_gradient_y() const {
    if (s <= 1e-30)
      return {};
    return Pplus.apply(AYp) * (std::sqrt(3.0) / s);
  }

  // dY/dD at fixed (eta, dbar)
  Mat66 force_damage_derivative() const {
    Mat66 dy = -dYh.m - nonlocal_force_derivative(p.variant, D, dbar, p.H_pen).m;
    if (p.e_d != 1.0) {
      const double coef2 = -(p.e_d * (p.e_d - 1.0) / 9.0) *
                           std::pow(1.0 - D.trace() / 3.0, p.e_d - 2.0) *
                           (p.mu * (1.0 - p.theta) * tre2 + 0.5 * p.K * treta * treta);
      const Vec6 mi = SymTensor2::identity().mandel();
      dy += coef2 * (mi * mi.transpose());
    }
    return dy;
  }

  // operator X -> X Yp G + G Yp X (columnwise in the Mandel basis)
  Mat66 sandwich_operator() const {
    static const double inv_s2 = 1.0 / std::sqrt(2.0);
    const std::array<SymTensor2, 6> basis = {
        SymTensor2{1, 0, 0, 0, 0, 0},      SymTensor2{0, 1, 0, 0, 0, 0},
        SymTensor2{0, 0, 1, 0, 0, 0},      SymTensor2{0, 0, 0, inv_s2, 0, 0},
        SymTensor2{0, 0, 0, 0, inv_s2, 0}, SymTensor2{0, 0, 0, 0, 0, inv_s2}};
    const Eigen::Matrix3d gm = G.matrix();
    const Eigen::Matrix3d ypm = Yp.matrix();
    Mat66 z;
    for (int b = 0; b < 6; ++b) {
      const Eigen::Matrix3d x = basis[b].matrix();
      z.col(b) = SymTensor2::from_matrix(x * ypm * gm + gm * ypm * x).mandel();
    }
    return z;
  }

  Eigen::Matrix<double, 7, 7> jacobian() const {
    const double c = 3.0 / (p.Y0 - Rd);
    const SymTensor4 tramp = positive_part_dderiv_contract(Y, AYp);
    const SymTensor4 a4 = t23_dyadic(G, G);
    const Mat66 dn_dy = c * (tramp.m + Pplus.m * a4.m * Pplus.m);
    const Mat66 dn_dd_ex = -c * (Pplus.m * sandwich_operator() * Lpow.m);
    const Mat66 dy_dd = force_damage_derivative();

    Eigen::Matrix<double, 7, 7> j;
    j.topLeftCorner<6, 6>() =
        Mat66::Identity() - dgamma * (dn_dy * dy_dd + dn_dd_ex);
    j.block<6, 1>(0, 6) = -(1.0 + dgamma * Rdp / (p.Y0 - Rd)) * N.mandel();

    const SymTensor2 dphi_dy = criterion_gradient_y();
    SymTensor2 dphi_dd_ex;
    if (s > 1e-30) {
      const SymTensor2 ypgyp =
          SymTensor2::from_matrix(Yp.matrix() * G.matrix() * Yp.matrix());
      dphi_dd_ex = Lpow.apply(ypgyp) * (-std::sqrt(3.0) / s);
    }
    j.block<1, 6>(6, 0) =
        (dy_dd.transpose() * dphi_dy.mandel() + dphi_dd_ex.mandel()).transpose();
    j(6, 6) = Rdp - p.eta_v / dt;
    return j;
  }
};

// dYe/deta as a Mandel operator (shared by public wrapper and tangents).
Mat66 dye_deta_impl(const SymTensor2& eta, const SymTensor2& d, const MaterialParams& p) {
  const SymTensor2 e = eta.deviator();
  const SymTensor4 pdev = SymTensor4::deviatoric_projector();
  const SymTensor4 te = t23_dyadic(e, SymTensor2::identity()) +
                        t23_dyadic(SymTensor2::identity(), e);
  const double coef1 = (p.e_d / 3.0) * std::pow(1.0 - d.trace() / 3.0, p.e_d - 1.0);
  const SymTensor2 w =
      (e * (2.0 * p.mu * (1.0 - p.theta)) + SymTensor2::identity() * (p.K * eta.trace())) * coef1;
  return p.mu * p.theta * (te.m * pdev.m) +
         SymTensor2::identity().mandel() * w.mandel().transpose();
}

struct PrimalSolution {
  bool elastic;
  SymTensor2 D;
  double xi, dgamma;
  int iterations;
  double consistency_residual;
};

PrimalSolution solve_primal(LocalEval& ev) {
  PrimalSolution sol{};
  if (!ev.evaluate(ev.old.D, 0.0))
    throw LocalDivergence("local_update: non-finite trial state");
  if (ev.phi <= 0.0) {
    sol.elastic = true;
    sol.D = ev.old.D;
    sol.xi = ev.old.xi_d;
    sol.consistency_residual = ev.phi;
    return sol;
  }

  constexpr int max_iter = 50;
  constexpr double tol = 1e-10;
  SymTensor2 d = ev.old.D;
  double dg = 0.0;
  double res = ev.scaled_residual();
  int it = 0;
  for (; it < max_iter; ++it) {
    if (res < tol)
      break;
    const Eigen::Matrix<double, 7, 7> j = ev.jacobian();
    const Eigen::Matrix<double, 7, 1> dx = j.fullPivLu().solve(-ev.r);
    if (!dx.allFinite())
      throw LocalDivergence("local_update: singular local system");
    // merit-based backtracking on the scaled residual norm
    double step = 1.0;
    bool accepted = false;
    for (int cut = 0; cut < 16; ++cut) {
      const SymTensor2 d_try = d + SymTensor2::from_mandel(step * dx.head<6>());
      const double dg_try = dg + step * dx[6];
      if (ev.evaluate(d_try, dg_try)) {
        const double nres = ev.scaled_residual();
        if (nres < tol || nres < res * (1.0 - 0.2 * step) || (cut >= 6 && nres < res)) {
          d = d_try;
          dg = dg_try;
          res = nres;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted)
      throw LocalDivergence("local_update: line search failed");
  }
  if (res >= tol)
    throw LocalDivergence("local_update: no convergence in 50 iterations");
  ev.evaluate(d, dg);  // leave the cache at the accepted point

  if (dg < 0.0) {
    if (dg < -1e-12)
      throw LocalDivergence("local_update: negative damage multiplier");
    dg = 0.0;
  }
  sol.elastic = false;
  sol.D = d;
  sol.xi = ev.old.xi_d + dg;
  sol.dgamma = dg;
  sol.iterations = it;
  sol.consistency_residual = ev.r[6];
  return sol;
}

void fill_elastic_result(LocalUpdateResult& out, const SymTensor2& eta,
                         const GaussPointState& old, const MaterialParams& p) {
  out.elastic = true;
  out.state = old;
  out.state.dissipation_increment = 0.0;
  out.alpha = elastic_energy_and_forces(eta, old.D, p).alpha;
  out.d_local = tuple_value(p.variant, old.D);
  out.dalpha_deta = elastic_tangent(eta, old.D, p);
}

}  // namespace

SymTensor2 kinematic_hardening_force(const SymTensor2& d, const MaterialParams& p) {
  check_damage_admissible(d, "kinematic_hardening_force");
  return barrier_force_with_derivative(d, p).first;
}

double kinematic_hardening_energy(const SymTensor2& d, const MaterialParams& p) {
  check_damage_admissible(d, "kinematic_hardening_energy");
  const BarrierKernel k(p);
  const Spectrum s = spectral_decompose(d);
  double psi = 0;
  for (int i = 0; i < 3; ++i)
    psi += p.K_h * k.energy(s.lambda[i]);
  return psi;
}

SymTensor4 interaction_tensor(const SymTensor2& d, double c_d) {
  if (max_eigenvalue(d) >= 1.0)
    throw StateOutOfRange("interaction_tensor: damage eigenvalue reached one");
  const SymTensor2 g = power_with_derivative(SymTensor2::identity() - d, c_d).first;
  return t23_dyadic(g, g);
}

double damage_criterion(const SymTensor2& y, double r_d, const SymTensor2& d,
                        const MaterialParams& p) {
  const SymTensor2 yp = positive_part(y);
  const SymTensor2 g = power_with_derivative(SymTensor2::identity() - d, p.c_d).first;
  const SymTensor2 ayp = SymTensor2::from_matrix(g.matrix() * yp.matrix() * g.matrix());
  const double s2 = std::max(0.0, yp.double_dot(ayp));
  return std::sqrt(3.0) * std::sqrt(s2) - (p.Y0 - r_d);
}

SymTensor2 flow_direction(const SymTensor2& y, double r_d, const SymTensor2& d,
                          const MaterialParams& p) {
  auto [yp, pplus] = positive_part_with_projection(y);
  const SymTensor2 g = power_with_derivative(SymTensor2::identity() - d, p.c_d).first;
  const SymTensor2 ayp = SymTensor2::from_matrix(g.matrix() * yp.matrix() * g.matrix());
  return pplus.apply(ayp) * (3.0 / (p.Y0 - r_d));
}

SymTensor4 elastic_tangent(const SymTensor2& /*eta*/, const SymTensor2& d,
                           const MaterialParams& p) {
  // the degraded Hencky law is linear in eta, so the tangent depends on D only
  const double fd = degradation_factor(d, p.e_d);
  const SymTensor2 m = SymTensor2::identity() - d;
  const SymTensor4 pdev = SymTensor4::deviatoric_projector();
  const SymTensor4 tm = t23_dyadic(m, SymTensor2::identity()) +
                        t23_dyadic(SymTensor2::identity(), m);
  SymTensor4 out;
  const Vec6 mi = SymTensor2::identity().mandel();
  out.m = p.mu * p.theta * (pdev.m * tm.m * pdev.m) +
          2.0 * p.mu * (1.0 - p.theta) * fd * pdev.m + fd * p.K * (mi * mi.transpose());
  return out;
}

SymTensor4 elastic_force_strain_derivative(const SymTensor2& eta, const SymTensor2& d,
                                           const MaterialParams& p) {
  SymTensor4 out;
  out.m = dye_deta_impl(eta, d, p);
  return out;
}

SymTensor2 stress_and_projection(const SymTensor2& alpha, const SymTensor2& c) {
  auto [eta, proj] = tensor_log_strain(c);
  (void)eta;
  return proj.apply(alpha);
}

LocalUpdateResult local_update(const SymTensor2& eta_new, const DbarTuple& dbar_new,
                               const GaussPointState& state_old, double dt,
                               const MaterialParams& p, TangentMode mode) {
  if (!(dt > 0))
    throw ConfigError("local_update: dt must be positive");

  LocalUpdateResult out;
  LocalEval ev(p, eta_new, dbar_new, state_old, dt);
  const PrimalSolution sol = solve_primal(ev);
  out.iterations = sol.iterations;
  out.delta_gamma = sol.dgamma;
  out.consistency_residual = sol.consistency_residual;

  if (sol.elastic) {
    fill_elastic_result(out, eta_new, state_old, p);
    return out;
  }

  // converged inelastic state: admissibility and dissipation bookkeeping
  if (max_eigenvalue(sol.D) >= 1.0)
    throw StateOutOfRange("local_update: damage eigenvalue reached one");
  if (sol.D.trace() >= 3.0)
    throw StateOutOfRange("local_update: tr D reached 3");

  out.elastic = false;
  out.state.D = sol.D;
  out.state.xi_d = sol.xi;
  out.state.dissipation_increment =
      ev.Y.double_dot(sol.D - state_old.D) + ev.Rd * (sol.xi - state_old.xi_d);
  out.alpha = elastic_energy_and_forces(eta_new, sol.D, p).alpha;
  out.d_local = tuple_value(p.variant, sol.D);

  const int n = p.variant.n_dbar;
  if (mode == TangentMode::Analytic) {
    // implicit-function differentiation of the converged system
    const Eigen::Matrix<double, 7, 7> j = ev.jacobian();
    const Mat66 dye = dye_deta_impl(eta_new, sol.D, p);
    const SymTensor2 dphi_dy = ev.criterion_gradient_y();
    const Mat66 dn_dy_scaled = [&] {
      const double c = 3.0 / (p.Y0 - ev.Rd);
      const SymTensor4 tramp = positive_part_dderiv_contract(ev.Y, ev.AYp);
      const SymTensor4 a4 = t23_dyadic(ev.G, ev.G);
      return Mat66(c * (tramp.m + ev.Pplus.m * a4.m * ev.Pplus.m));
    }();

    Eigen::Matrix<double, 7, Eigen::Dynamic> b(7, 6 + n);
    b.block<6, 6>(0, 0) = -sol.dgamma * (dn_dy_scaled * dye);
    b.block<1, 6>(6, 0) = (dye.transpose() * dphi_dy.mandel()).transpose();
    for (int k = 0; k < n; ++k) {
      const Vec6 tk = p.H_pen[k] * ev.T[k].mandel();
      b.block<6, 1>(0, 6 + k) = -sol.dgamma * (dn_dy_scaled * tk);
      b(6, 6 + k) = dphi_dy.mandel().dot(tk);
    }
    const Eigen::Matrix<double, 7, Eigen::Dynamic> x = j.fullPivLu().solve(-b);
    const Eigen::Matrix<double, 6, 6> dd_deta = x.block<6, 6>(0, 0);

    SymTensor4 dalpha_dd;
    dalpha_dd.m = -dye.transpose();
    out.dalpha_deta = elastic_tangent(eta_new, sol.D, p);
    out.dalpha_deta.m += dalpha_dd.m * dd_deta;
    for (int k = 0; k < n; ++k)
      out.dalpha_ddbar[k] = SymTensor2::from_mandel(dalpha_dd.m * x.block<6, 1>(0, 6 + k));
    for (int i = 0; i < n; ++i) {
      out.ddlocal_deta[i] =
          SymTensor2::from_mandel(dd_deta.transpose() * ev.T[i].mandel());
      for (int k = 0; k < n; ++k)
        out.ddlocal_ddbar(i, k) = ev.T[i].mandel().dot(x.block<6, 1>(0, 6 + k));
    }
  } else {
    // finite-difference fallback: re-solve the local problem at perturbed inputs
    auto primal_outputs = [&](const SymTensor2& eta_p, const DbarTuple& dbar_p) {
      LocalEval evp(p, eta_p, dbar_p, state_old, dt);
      const PrimalSolution s = solve_primal(evp);
      const SymTensor2 a = elastic_energy_and_forces(eta_p, s.D, p).alpha;
      return std::make_pair(a, tuple_value(p.variant, s.D));
    };
    const double h = 1e-7 * std::max(1.0, eta_new.norm());
    static const double inv_s2 = 1.0 / std::sqrt(2.0);
    const std::array<SymTensor2, 6> basis = {
        SymTensor2{1, 0, 0, 0, 0, 0},      SymTensor2{0, 1, 0, 0, 0, 0},
        SymTensor2{0, 0, 1, 0, 0, 0},      SymTensor2{0, 0, 0, inv_s2, 0, 0},
        SymTensor2{0, 0, 0, 0, inv_s2, 0}, SymTensor2{0, 0, 0, 0, 0, inv_s2}};
    for (int bcol = 0; bcol < 6; ++bcol) {
      auto [ap, dp] = primal_outputs(eta_new + basis[bcol] * h, dbar_new);
      auto [am, dm] = primal_outputs(eta_new - basis[bcol] * h, dbar_new);
      out.dalpha_deta.m.col(bcol) = ((ap - am) * (1.0 / (2 * h))).mandel();
      for (int i = 0; i < n; ++i) {
        Vec6 col = out.ddlocal_deta[i].mandel();
        col[bcol] = (dp[i] - dm[i]) / (2 * h);
        out.ddlocal_deta[i] = SymTensor2::from_mandel(col);
      }
    }
    for (int k = 0; k < n; ++k) {
      DbarTuple dbp = dbar_new, dbm = dbar_new;
      dbp[k] += h;
      dbm[k] -= h;
      auto [ap, dp] = primal_outputs(eta_new, dbp);
      auto [am, dm] = primal_outputs(eta_new, dbm);
      out.dalpha_ddbar[k] = (ap - am) * (1.0 / (2 * h));
      for (int i = 0; i < n; ++i)
        out.ddlocal_ddbar(i, k) = (dp[i] - dm[i]) / (2 * h);
    }
  }
  return out;
}

}  // namespace mdam
