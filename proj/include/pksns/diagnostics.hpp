#pragma once

#include <vector>

#include "pksns/field.hpp"
#include "pksns/state.hpp"

namespace pksns {

/// omega2 = d_z u1 - d_x u3 and Delta u2 of a 3-component velocity.
SpectralField compute_omega2(const SpectralField& u, double drift = 0.0);
SpectralField compute_lap_u2(const SpectralField& u, double drift = 0.0);

/// L2 norm of (omega2(after) - omega2(before)) / dt minus the omega2
/// equation's right-hand side averaged over both end states. Both states
/// must share a grid; a remap between them is undone on `before`.
double residual_omega2(const State& before, const State& after, double dt, const Params& p);

/// Auxiliary fields splitting u1,0 = G1 + B1 + B2 on the (y,z) cross-section.
struct DecompositionState {
  SpectralField G1, B1, B2;

  /// Good part G1 + tilde(B1).
  SpectralField U1() const;
  /// Bad part tilde(B2) + bar(B2) + bar(B1).
  SpectralField U2() const;
};

/// G1 = (u1_in)_0, B1 = B2 = 0.
DecompositionState init_decomposition(const SpectralField& u);

/// Non-stiff right-hand sides of the three auxiliary equations.
/// `u0` is the cross-section velocity (3 components), `n0` the density zero
/// mode and `g` the fluctuation forcing (u_neq . grad u1_neq)_0.
struct DecompositionRhs {
  SpectralField G1, B1, B2;
};
DecompositionRhs decomposition_rhs(const DecompositionState& d, const SpectralField& u0,
                                   const SpectralField& n0, const SpectralField& g,
                                   double A, bool dealias);

/// Zero-mode transport (u2,0 d_y + u3,0 d_z) X in divergence form.
SpectralField zero_mode_advection(const SpectralField& u0, const SpectralField& X,
                                  bool dealias);

/// One Heun step with the heat factor e^{-|k|^2 dt / A} and frozen inputs.
/// The mean of the B1 forcing is set to mass / |T^3|.
void co_evolve_decomposition(DecompositionState& d, const SpectralField& u0,
                             const SpectralField& n0, double mass, double A, double dt,
                             const SpectralField* g = nullptr);

/// d_t U2 evaluated from the B1/B2 equations.
SpectralField dt_U2(const DecompositionState& d, const SpectralField& u0, double nbar,
                    double A);

/// kappa = d_zV / d_yV with V = y + U2/A, and the coefficients rho1, rho2.
struct KappaRho {
  RealField kappa, rho1, rho2, dyV, dzV;
  RealField dy_kappa, dz_kappa;
};
/// Throws NumericalAbort if min d_yV < 1/2.
KappaRho compute_kappa_rho(const SpectralField& U2, double A);

/// max |grad kappa . grad f - rho1 grad V . grad f - rho2 (d_z - kappa d_y) f|
/// over the cross-section grid, divided by max |grad kappa| |grad f|.
double kappa_identity_residual(const KappaRho& q, const SpectralField& f);

/// W = u2,neq + kappa u3,neq evaluated pointwise on the sheared grid.
SpectralField compute_W(const SpectralField& u, const RealField& kappa);

/// Running sup and trapezoid integrals of e^{2wt} ||q||^2, e^{2wt} ||grad q||^2
/// and e^{2wt} ||grad Delta^{-1} d_x q||^2.
struct NormAccumulator {
  double w = 0.0;
  double sup = 0.0;
  double int_l2 = 0.0;
  double int_grad = 0.0;
  double int_gdx = 0.0;

  /// `scale` multiplies q; `has_x` is false for cross-section fields, whose
  /// first axis is y.
  void add(double t, const SpectralField& q, double drift, double scale = 1.0,
           bool has_x = true);
  double X(double A) const;
  double Y0(double A) const;

 private:
  bool started_ = false;
  double t_prev_ = 0.0;
  double prev_[3] = {0.0, 0.0, 0.0};
};

struct EnergyReport {
  double E11 = 0, E12 = 0, E21 = 0, E22 = 0, E3 = 0, E4 = 0, E51 = 0, E52 = 0;
};

struct EnergyLedger {
  explicit EnergyLedger(const Params& p = Params{});

  double A = 1.0;
  int dim = 2;
  // E11 (Y0)
  NormAccumulator u20, u30, grad_u20, grad_u30, lap_u20, lap_u30_weighted;
  // E12
  double sup_lapU2 = 0.0, int_grad_lapU2 = 0.0, sup_dtU2 = 0.0;
  // X_b
  NormAccumulator dxx_n, dxx_u2, dxx_u3, lap_u3, good_u2, good_u3, dx_grad_W;
  // X_a
  NormAccumulator lap_u2, dx_omega, dy_omega, dz_omega;
  double sup_linf = 0.0;

 private:
  friend void ledger_update(EnergyLedger&, const State&, const DecompositionState*,
                            const KappaRho*);
  bool started_ = false;
  double t_prev_ = 0.0;
  double prev_grad_lapU2_ = 0.0;
};

/// Add one sample at state.t. `d` and `q` may be null (2D runs or no
/// decomposition tracking); the affected accumulators are then left at zero.
void ledger_update(EnergyLedger& ledger, const State& s, const DecompositionState* d,
                   const KappaRho* q);
EnergyReport energy_report(const EnergyLedger& ledger);

}  // namespace pksns
