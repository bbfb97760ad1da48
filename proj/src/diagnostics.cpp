#include "pksns/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "pksns/decomposition.hpp"
#include "pksns/errors.hpp"
#include "pksns/fft.hpp"
#include "pksns/nonlinear.hpp"
#include "pksns/shear.hpp"
#include "pksns/spectral.hpp"

namespace pksns {

namespace {

void require_velocity3(const SpectralField& u, const char* who) {
  if (u.grid().dim != 3 || u.components() != 3) {
    throw ContractViolation(std::string(who) + ": needs a 3-component 3D velocity");
  }
}

// Broadcast a cross-section field over the x axis of the full grid.
Eigen::ArrayXd broadcast_x(const RealField& cs, const GridSpec& full) {
  return cs.component(0).replicate(static_cast<Eigen::Index>(full.n[0]), 1);
}

SpectralField omega2_rhs(const State& s, const Params& p) {
  const double drift = s.frame.drift;
  const SpectralField& u = s.u;
  const Wavenumbers w(u.grid(), drift);
  const SpectralField adv = momentum_advection(to_physical(u, p.dealias), drift, p.dealias);
  const Complex I(0.0, 1.0);
  const SpectralField om = compute_omega2(u, drift);
  SpectralField r(u.grid(), 1);
  r.component(0) = -w.k_sq / p.A * om.component(0) - I * w.deriv[2] * u.component(1) +
                   (-I * w.deriv[2] * adv.component(0) + I * w.deriv[0] * adv.component(2) +
                    I * w.deriv[2] * s.n.component(0)) /
                       p.A;
  return r;
}

}  // namespace

SpectralField compute_omega2(const SpectralField& u, double drift) {
  require_velocity3(u, "compute_omega2");
  return derivative(u.extract(0), 2, drift) - derivative(u.extract(2), 0, drift);
}

SpectralField compute_lap_u2(const SpectralField& u, double drift) {
  require_velocity3(u, "compute_lap_u2");
  return laplacian(u.extract(1), drift);
}

double residual_omega2(const State& before, const State& after, double dt, const Params& p) {
  if (!(before.n.grid() == after.n.grid()) || !(before.u.grid() == after.u.grid())) {
    throw ContractViolation("residual_omega2: states live on different grids");
  }
  require_velocity3(after.u, "residual_omega2");
  if (!(dt > 0.0)) throw ContractViolation("residual_omega2: dt must be > 0");
  State b = before;
  const double jump = b.frame.drift - after.frame.drift;
  if (jump > 0.5) {
    const long shift = std::lround(jump);
    remap_in_place(b.n, shift);
    remap_in_place(b.u, shift);
    b.frame.drift -= static_cast<double>(shift);
  }
  const SpectralField wb = compute_omega2(b.u, b.frame.drift);
  const SpectralField wa = compute_omega2(after.u, after.frame.drift);
  SpectralField r = wa - wb;
  r *= 1.0 / dt;
  SpectralField mid = omega2_rhs(b, p) + omega2_rhs(after, p);
  mid *= 0.5;
  return l2_norm(r - mid);
}

SpectralField DecompositionState::U1() const {
  SpectralField out = G1 + B1;
  out.coeffs()(0, 0) -= B1.coeffs()(0, 0);
  return out;
}

SpectralField DecompositionState::U2() const {
  SpectralField out = B2;
  out.coeffs()(0, 0) += B1.coeffs()(0, 0);
  return out;
}

DecompositionState init_decomposition(const SpectralField& u) {
  require_velocity3(u, "init_decomposition");
  DecompositionState d;
  d.G1 = zero_mode(u).extract(0);
  d.B1 = SpectralField(d.G1.grid(), 1);
  d.B2 = SpectralField(d.G1.grid(), 1);
  return d;
}

SpectralField zero_mode_advection(const SpectralField& u0, const SpectralField& X,
                                  bool truncate) {
  const GridSpec& cs = X.grid();
  if (!(u0.grid() == cs) || u0.components() != 3 || cs.dim != 2) {
    throw ContractViolation("zero_mode_advection: expects cross-section fields");
  }
  RealField v(cs, 2);
  Eigen::ArrayXcd col(u0.modes());
  const ModeTable& t = mode_table(cs);
  for (int a = 0; a < 2; ++a) {
    col = u0.component(a + 1);
    if (truncate) col *= t.keep;
    fft::inverse(cs, col, v.component(a));
  }
  return flux_divergence(to_physical(X, truncate), v, 0.0, truncate);
}

DecompositionRhs decomposition_rhs(const DecompositionState& d, const SpectralField& u0,
                                   const SpectralField& n0, const SpectralField& g, double A,
                                   bool truncate) {
  DecompositionRhs r;
  r.G1 = zero_mode_advection(u0, d.G1, truncate) + g;
  r.G1 *= -1.0 / A;
  r.B1 = zero_mode_advection(u0, d.B1, truncate);
  r.B1 *= -1.0 / A;
  r.B1.component(0) += n0.component(0) / A;
  r.B2 = zero_mode_advection(u0, d.B2, truncate);
  r.B2 *= -1.0 / A;
  r.B2.component(0) -= u0.component(1);
  return r;
}

void co_evolve_decomposition(DecompositionState& d, const SpectralField& u0,
                             const SpectralField& n0, double mass, double A, double dt,
                             const SpectralField* g) {
  if (!(A >= 1.0) || !(dt > 0.0)) throw ContractViolation("co_evolve_decomposition: bad A or dt");
  const GridSpec& cs = d.G1.grid();
  SpectralField n = n0;
  n.coeffs()(0, 0) = mass / std::pow(kTwoPi, 3);
  const SpectralField zero(cs, 1);
  const SpectralField& forcing = g != nullptr ? *g : zero;
  const Eigen::ArrayXd E = (-Wavenumbers(cs).k_sq * dt / A).exp();

  const DecompositionRhs R0 = decomposition_rhs(d, u0, n, forcing, A, true);
  DecompositionState s = d;
  auto predict = [&](SpectralField& X, const SpectralField& r) {
    X.coeffs() += dt * r.coeffs();
    X.component(0) *= E;
  };
  predict(s.G1, R0.G1);
  predict(s.B1, R0.B1);
  predict(s.B2, R0.B2);
  const DecompositionRhs R1 = decomposition_rhs(s, u0, n, forcing, A, true);
  auto correct = [&](SpectralField& X, const SpectralField& r0, const SpectralField& r1) {
    X.coeffs() += 0.5 * dt * r0.coeffs();
    X.component(0) *= E;
    X.coeffs() += 0.5 * dt * r1.coeffs();
  };
  correct(d.G1, R0.G1, R1.G1);
  correct(d.B1, R0.B1, R1.B1);
  correct(d.B2, R0.B2, R1.B2);
}

SpectralField dt_U2(const DecompositionState& d, const SpectralField& u0, double nbar, double A) {
  SpectralField r = laplacian(d.B2) - zero_mode_advection(u0, d.B2, true);
  r *= 1.0 / A;
  r.component(0) -= u0.component(1);
  r.coeffs()(0, 0) += nbar / A;
  return r;
}

KappaRho compute_kappa_rho(const SpectralField& U2, double A) {
  const GridSpec& cs = U2.grid();
  if (cs.dim != 2 || U2.components() != 1) {
    throw ContractViolation("compute_kappa_rho: expects a scalar on the (y,z) cross-section");
  }
  const SpectralField Uy = derivative(U2, 0);
  const SpectralField Uz = derivative(U2, 1);
  const auto y = inverse_transform(Uy).values();
  const auto z = inverse_transform(Uz).values();
  const auto yy = inverse_transform(derivative(Uy, 0)).values();
  const auto yz = inverse_transform(derivative(Uy, 1)).values();
  const auto zz = inverse_transform(derivative(Uz, 1)).values();

  KappaRho q;
  for (RealField* f : {&q.kappa, &q.rho1, &q.rho2, &q.dyV, &q.dzV, &q.dy_kappa, &q.dz_kappa}) {
    *f = RealField(cs, 1);
  }
  q.dyV.values() = 1.0 + y / A;
  q.dzV.values() = z / A;
  if (q.dyV.values().minCoeff() < 0.5) {
    throw NumericalAbort("quasi-linear frame lost: min d_yV below 1/2");
  }
  const Eigen::ArrayXXd Vy = q.dyV.values();
  const Eigen::ArrayXXd Vz = q.dzV.values();
  const Eigen::ArrayXXd k = Vz / Vy;
  q.kappa.values() = k;
  q.dy_kappa.values() = (yz / A * Vy - Vz * yy / A) / Vy.square();
  q.dz_kappa.values() = (zz / A * Vy - Vz * yz / A) / Vy.square();
  const Eigen::ArrayXXd ky = q.dy_kappa.values();
  const Eigen::ArrayXXd kz = q.dz_kappa.values();
  const Eigen::ArrayXXd one_k2 = 1.0 + k.square();
  q.rho1.values() = (ky + k * kz) / (Vy * one_k2);
  q.rho2.values() = (kz - k * ky) / one_k2;
  return q;
}

double kappa_identity_residual(const KappaRho& q, const SpectralField& f) {
  if (!(f.grid() == q.kappa.grid())) {
    throw ContractViolation("kappa_identity_residual: grid mismatch");
  }
  const Eigen::ArrayXXd fy = inverse_transform(derivative(f, 0)).values();
  const Eigen::ArrayXXd fz = inverse_transform(derivative(f, 1)).values();
  const auto& k = q.kappa.values();
  const Eigen::ArrayXXd lhs = q.dy_kappa.values() * fy + q.dz_kappa.values() * fz;
  const Eigen::ArrayXXd rhs = q.rho1.values() * (q.dyV.values() * fy + q.dzV.values() * fz) +
                              q.rho2.values() * (fz - k * fy);
  const double scale = ((q.dy_kappa.values().square() + q.dz_kappa.values().square()).sqrt() *
                        (fy.square() + fz.square()).sqrt())
                           .maxCoeff();
  const double err = (lhs - rhs).abs().maxCoeff();
  return scale > 0.0 ? err / scale : err;
}

SpectralField compute_W(const SpectralField& u, const RealField& kappa) {
  require_velocity3(u, "compute_W");
  if (!(kappa.grid() == u.grid().cross_section())) {
    throw ContractViolation("compute_W: kappa must live on the cross-section");
  }
  const SpectralField un = nonzero_mode(u);
  const RealField v = inverse_transform(un);
  RealField w(u.grid(), 1);
  w.values().col(0) = v.component(1) + broadcast_x(kappa, u.grid()) * v.component(2);
  return forward_transform(w);
}

void NormAccumulator::add(double t, const SpectralField& q, double drift, double scale,
                          bool has_x) {
  const double s2 = scale * scale;
  const double e = std::exp(2.0 * w * t) * s2;
  const Wavenumbers k(q.grid(), drift);
  const double vol = q.grid().volume();
  double l2 = 0.0, grad = 0.0, gdx = 0.0;
  Eigen::ArrayXd ratio = Eigen::ArrayXd::Zero(q.modes());
  if (has_x) {
    ratio = k.k[0].square() / k.k_sq;
    ratio[0] = 0.0;
  }
  for (int c = 0; c < q.components(); ++c) {
    const Eigen::ArrayXd a2 = q.component(c).abs2();
    l2 += a2.sum();
    grad += (a2 * k.k_sq).sum();
    gdx += (a2 * ratio).sum();
  }
  const double v[3] = {e * vol * l2, e * vol * grad, e * vol * gdx};
  sup = std::max(sup, v[0]);
  if (started_) {
    const double h = 0.5 * (t - t_prev_);
    int_l2 += h * (prev_[0] + v[0]);
    int_grad += h * (prev_[1] + v[1]);
    int_gdx += h * (prev_[2] + v[2]);
  }
  started_ = true;
  t_prev_ = t;
  for (int i = 0; i < 3; ++i) prev_[i] = v[i];
}

double NormAccumulator::X(double A) const {
  return std::sqrt(sup + int_gdx + int_l2 / std::cbrt(A) + int_grad / A);
}

double NormAccumulator::Y0(double A) const { return std::sqrt(sup + int_grad / A); }

EnergyLedger::EnergyLedger(const Params& p) : A(p.A), dim(p.grid.dim) {
  const double wa = p.a_weight / std::cbrt(p.A);
  const double wb = p.b_weight / std::cbrt(p.A);
  for (NormAccumulator* x : {&dxx_n, &dxx_u2, &dxx_u3, &lap_u3, &good_u2, &good_u3, &dx_grad_W}) {
    x->w = wb;
  }
  for (NormAccumulator* x : {&lap_u2, &dx_omega, &dy_omega, &dz_omega}) x->w = wa;
}

void ledger_update(EnergyLedger& L, const State& s, const DecompositionState* d,
                   const KappaRho* q) {
  const double t = s.t;
  const double drift = s.frame.drift;
  const double A = L.A;
  auto dx = [drift](const SpectralField& f, int times = 1) {
    SpectralField out = f;
    for (int i = 0; i < times; ++i) out = derivative(out, 0, drift);
    return out;
  };

  L.dxx_n.add(t, dx(nonzero_mode(s.n), 2), drift);
  L.sup_linf = std::max(L.sup_linf, inverse_transform(s.n).component(0).abs().maxCoeff());

  if (s.u.components() == 3) {
    const SpectralField u0 = zero_mode(s.u);
    const SpectralField u20 = u0.extract(1);
    const SpectralField u30 = u0.extract(2);
    L.u20.add(t, u20, 0.0, 1.0, false);
    L.u30.add(t, u30, 0.0, 1.0, false);
    L.grad_u20.add(t, gradient(u20), 0.0, 1.0, false);
    L.grad_u30.add(t, gradient(u30), 0.0, 1.0, false);
    L.lap_u20.add(t, laplacian(u20), 0.0, 1.0, false);
    const double m = std::min(std::sqrt(std::pow(A, -2.0 / 3.0) + t / A), 1.0);
    L.lap_u30_weighted.add(t, laplacian(u30), 0.0, m, false);

    const SpectralField un = nonzero_mode(s.u);
    const SpectralField u2n = un.extract(1);
    const SpectralField u3n = un.extract(2);
    L.lap_u2.add(t, laplacian(u2n, drift), drift);
    const SpectralField om = compute_omega2(un, drift);
    L.dx_omega.add(t, derivative(om, 0, drift), drift);
    L.dy_omega.add(t, derivative(om, 1, drift), drift);
    L.dz_omega.add(t, derivative(om, 2, drift), drift);
    L.dxx_u2.add(t, dx(u2n, 2), drift);
    L.dxx_u3.add(t, dx(u3n, 2), drift);
    L.lap_u3.add(t, laplacian(u3n, drift), drift);

    if (q != nullptr) {
      const Eigen::ArrayXd kap = broadcast_x(q->kappa, s.u.grid());
      auto good = [&](const SpectralField& f) {
        const RealField fz = inverse_transform(derivative(f, 2, drift));
        const RealField fy = inverse_transform(derivative(f, 1, drift));
        RealField g(f.grid(), 1);
        g.values().col(0) = fz.component(0) - kap * fy.component(0);
        return dx(forward_transform(g));
      };
      L.good_u2.add(t, good(u2n), drift);
      L.good_u3.add(t, good(u3n), drift);
      const SpectralField W = compute_W(s.u, q->kappa);
      L.dx_grad_W.add(t, dx(gradient(W, drift)), drift);
    }
    if (d != nullptr) {
      const SpectralField lapU2 = laplacian(d->U2());
      L.sup_lapU2 = std::max(L.sup_lapU2, sobolev_norm(lapU2, 2));
      const double g = std::pow(sobolev_norm(gradient(lapU2), 2), 2);
      if (L.started_) L.int_grad_lapU2 += 0.5 * (t - L.t_prev_) * (L.prev_grad_lapU2_ + g);
      L.prev_grad_lapU2_ = g;
      const double nbar = s.n.coeffs()(0, 0).real();
      L.sup_dtU2 = std::max(L.sup_dtU2, sobolev_norm(dt_U2(*d, u0, nbar, A), 2));
    }
  }
  L.started_ = true;
  L.t_prev_ = t;
}

EnergyReport energy_report(const EnergyLedger& L) {
  const double A = L.A;
  EnergyReport r;
  r.E11 = L.u20.Y0(A) + L.u30.Y0(A) + L.grad_u20.Y0(A) + L.grad_u30.Y0(A) + L.lap_u20.Y0(A) +
          L.lap_u30_weighted.Y0(A);
  r.E12 = (L.sup_lapU2 + std::sqrt(L.int_grad_lapU2 / A)) / A + L.sup_dtU2;
  r.E21 = L.dxx_n.X(A);
  r.E22 = L.lap_u2.X(A) + L.dx_omega.X(A) +
          (L.dy_omega.X(A) + L.dz_omega.X(A)) / std::cbrt(A);
  r.E3 = L.sup_linf;
  r.E4 = L.dxx_u2.X(A) + L.dxx_u3.X(A);
  r.E51 = std::pow(A, -2.0 / 3.0) * L.lap_u3.X(A);
  r.E52 = L.dxx_u2.X(A) + L.good_u2.X(A) + L.dxx_u3.X(A) + L.good_u3.X(A) + L.dx_grad_W.X(A);
  return r;
}

}  // namespace pksns
