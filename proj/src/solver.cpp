#include "pksns/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pksns/decomposition.hpp"
#include "pksns/errors.hpp"
#include "pksns/fft.hpp"
#include "pksns/inequality.hpp"
#include "pksns/nonlinear.hpp"
#include "pksns/spectral.hpp"

namespace pksns {

namespace {

constexpr double kDriftSlack = 1e-12;

double max_magnitude(const RealField& v) {
  if (v.components() == 0) return 0.0;
  return v.values().square().rowwise().sum().sqrt().maxCoeff();
}

// Density tendency plus the physical velocity used for it (for reuse by the
// momentum terms) and the transport speeds for the step-size rule.
struct DensityTerms {
  SpectralField dn;
  RealField u_phys;
  double speed_u = 0.0;
  double speed_c = 0.0;
};

DensityTerms density_terms(const SpectralField& n, const SpectralField& u,
                           const SpectralField* c, double A, double drift, bool truncate) {
  const GridSpec& g = n.grid();
  DensityTerms out;
  const RealField nphys = to_physical(n, truncate);
  RealField v(g, g.dim);
  if (c != nullptr) {
    const Wavenumbers w(g, drift);
    const ModeTable& t = mode_table(g);
    const Complex I(0.0, 1.0);
    Eigen::ArrayXcd col(n.modes());
    for (int a = 0; a < g.dim; ++a) {
      col = c->component(0) * (I * w.deriv[a]);
      if (truncate) col *= t.keep;
      fft::inverse(g, col, v.component(a));
    }
    out.speed_c = max_magnitude(v);
  }
  if (u.components() > 0) {
    out.u_phys = to_physical(u, truncate);
    out.speed_u = max_magnitude(out.u_phys);
    v.values() += out.u_phys.values();
  }
  out.dn = flux_divergence(nphys, v, drift, truncate);
  out.dn *= -1.0 / A;
  return out;
}

// P[(n e1 - adv)/A - u2 e1] given the momentum advection `adv`.
SpectralField projected_velocity_terms(const SpectralField& n, const SpectralField& u,
                                       const SpectralField& adv, double A, double drift) {
  SpectralField F = adv;
  F *= -1.0 / A;
  F.component(0) += n.component(0) / A - u.component(1);
  return leray_project(F, drift);
}

// Pressure share of the shear transport, k1 u2 k / |k|^2. Together with
// the lift-up term it keeps k_eff . u = 0 while k_eff drifts.
void add_shear_pressure(SpectralField& du, const SpectralField& u, double drift) {
  const Wavenumbers w(u.grid(), drift);
  Eigen::ArrayXd s = w.k[0] / w.k_sq;
  s[0] = 0.0;
  const Eigen::ArrayXcd q = u.component(1) * s;
  for (int a = 0; a < 3; ++a) du.component(a) += q * w.k[a];
}

double nonmean_energy(const SpectralField& F) {
  if (F.components() == 0) return 0.0;
  return F.coeffs().abs2().sum() - F.coeffs().row(0).abs2().sum();
}

}  // namespace

SpectralField rhs_density(const SpectralField& n, const SpectralField& u, const SpectralField& c,
                          double A, double drift, bool dealias) {
  return density_terms(n, u, &c, A, drift, dealias).dn;
}

SpectralField rhs_velocity(const SpectralField& n, const SpectralField& u, double A,
                           double drift, bool dealias) {
  if (u.grid().dim != 3 || u.components() != 3) {
    throw ContractViolation("rhs_velocity needs a 3-component 3D velocity");
  }
  const SpectralField adv = momentum_advection(to_physical(u, dealias), drift, dealias);
  return projected_velocity_terms(n, u, adv, A, drift);
}

double tail_ratio(const SpectralField& F, bool shear) {
  if (F.components() == 0) return 0.0;
  const GridSpec& g = F.grid();
  const ModeTable& t = mode_table(g);
  Eigen::ArrayXd r = Eigen::ArrayXd::Zero(F.modes());
  for (int a = 0; a < g.dim; ++a) {
    Eigen::ArrayXd ra = t.k[a].abs() / std::max(1, g.cutoff(a));
    if (shear && a == 1) ra = (t.k[0] == 0.0).select(ra, 0.0);
    r = r.max(ra);
  }
  const Eigen::ArrayXd e = F.coeffs().abs2().rowwise().sum();
  const double total = e.sum() - e[0];
  if (total <= 0.0) return 0.0;
  return (r > 2.0 / 3.0).select(e, 0.0).sum() / total;
}

Integrator::Integrator(const Params& p) : p_(p) { p_.validate(); }

Integrator::Eval Integrator::evaluate(const SpectralField& n, const SpectralField& u,
                                      double drift, const DecompositionState* d) const {
  Eval e;
  SpectralField c;
  if (p_.chemotaxis) c = solve_chemo(n, drift);
  DensityTerms dt = density_terms(n, u, p_.chemotaxis ? &c : nullptr, p_.A, drift, p_.dealias);
  e.dn = std::move(dt.dn);
  e.speed = std::max(dt.speed_u, dt.speed_c);
  if (u.components() > 0) {
    const SpectralField adv = momentum_advection(dt.u_phys, drift, p_.dealias);
    e.du = projected_velocity_terms(n, u, adv, p_.A, drift);
    if (p_.shear) add_shear_pressure(e.du, u, drift);
    if (d != nullptr) {
      const SpectralField u0 = zero_mode(u);
      const SpectralField u10 = u0.extract(0);
      SpectralField g = zero_mode(adv).extract(0);
      g -= zero_mode_advection(u0, u10, p_.dealias);
      e.dd = decomposition_rhs(*d, u0, zero_mode(n), g, p_.A, p_.dealias);
    }
  }
  return e;
}

StepInfo Integrator::step(State& s, DecompositionState* d, double t_stop) {
  const GridSpec& g = s.n.grid();
  if (s.u.components() == 0) d = nullptr;
  const double rate = p_.shear_rate();
  const double d0 = s.frame.drift;

  Eval R0 = evaluate(s.n, s.u, d0, d);

  double dt = p_.dt_max;
  if (!p_.fixed_dt && R0.speed > 0.0) {
    double h = g.spacing(0);
    for (int a = 1; a < g.dim; ++a) h = std::min(h, g.spacing(a));
    dt = std::min(dt, p_.cfl * h * p_.A / R0.speed);
  }
  const double left = t_stop - s.t;
  bool lands = false;
  if (dt >= left) {
    dt = left;
    lands = true;
  }
  if (rate > 0.0) {
    const double room = (1.0 - d0) / rate;
    if (dt > room) {
      dt = room;
      lands = false;
    }
  }
  if (!(dt >= p_.dt_min)) throw NumericalAbort("time step underflow at t = " + std::to_string(s.t));

  const LinearPropagator L(p_.A, dt, rate);
  const Eigen::ArrayXd E = L.factors(g, d0);
  const Eigen::Index ncs = static_cast<Eigen::Index>(g.cross_section().size());
  const double d1 = d0 + rate * dt;
  auto propagate = [&](SpectralField& F) {
    for (int c = 0; c < F.components(); ++c) F.component(c) *= E;
  };
  auto propagate_cs = [&](SpectralField& F) { F.component(0) *= E.head(ncs); };

  // predictor
  SpectralField n1 = s.n;
  n1.coeffs() += dt * R0.dn.coeffs();
  propagate(n1);
  SpectralField u1 = s.u;
  if (u1.components() > 0) {
    u1.coeffs() += dt * R0.du.coeffs();
    propagate(u1);
    u1 = leray_project(u1, d1);
  }
  DecompositionState dstar;
  if (d != nullptr) {
    dstar = *d;
    dstar.G1.coeffs() += dt * R0.dd.G1.coeffs();
    dstar.B1.coeffs() += dt * R0.dd.B1.coeffs();
    dstar.B2.coeffs() += dt * R0.dd.B2.coeffs();
    propagate_cs(dstar.G1);
    propagate_cs(dstar.B1);
    propagate_cs(dstar.B2);
  }

  const Eval R1 = evaluate(n1, u1, d1, d != nullptr ? &dstar : nullptr);

  // corrector
  const double h = 0.5 * dt;
  s.n.coeffs() += h * R0.dn.coeffs();
  propagate(s.n);
  s.n.coeffs() += h * R1.dn.coeffs();
  enforce_hermitian(s.n);
  if (s.u.components() > 0) {
    s.u.coeffs() += h * R0.du.coeffs();
    propagate(s.u);
    s.u.coeffs() += h * R1.du.coeffs();
    s.u = leray_project(s.u, d1);
    enforce_hermitian(s.u);
  }
  if (d != nullptr) {
    auto advance = [&](SpectralField& X, const SpectralField& r0, const SpectralField& r1) {
      X.coeffs() += h * r0.coeffs();
      propagate_cs(X);
      X.coeffs() += h * r1.coeffs();
      enforce_hermitian(X);
    };
    advance(d->G1, R0.dd.G1, R1.dd.G1);
    advance(d->B1, R0.dd.B1, R1.dd.B1);
    advance(d->B2, R0.dd.B2, R1.dd.B2);
  }

  if (!s.n.coeffs().allFinite() || !s.u.coeffs().allFinite()) {
    throw NumericalAbort("non-finite coefficient at t = " + std::to_string(s.t + dt));
  }

  s.t = lands ? t_stop : s.t + dt;
  s.frame.drift = d1;
  StepInfo info;
  info.dt = dt;
  if (rate > 0.0 && std::abs(d1) >= 1.0 - kDriftSlack) {
    const long shift = std::lround(d1);
    const double before = nonmean_energy(s.n) + nonmean_energy(s.u);
    double lost = remap_in_place(s.n, shift);
    if (s.u.components() > 0) lost += remap_in_place(s.u, shift);
    s.frame.drift = d1 - static_cast<double>(shift);
    s.frame.t_last_remap = s.t - s.frame.drift / rate;
    info.remapped = true;
    info.dropped = before > 0.0 ? lost / (g.volume() * before) : 0.0;
    s.dropped_energy += info.dropped;
  }
  return info;
}

State step(const State& s, const Params& p) {
  State out = s;
  Integrator(p).step(out, nullptr, std::numeric_limits<double>::infinity());
  return out;
}

namespace {

struct Sampler {
  const Params& p;
  const RunOptions& opt;
  EnergyLedger ledger;

  SeriesRow row(const State& s, const DecompositionState* d, double dt, RunStatus st) {
    SeriesRow r;
    r.t = s.t;
    r.mass = s.mass();
    const RealField nphys = inverse_transform(s.n);
    r.n_min = nphys.component(0).minCoeff();
    r.n_linf = nphys.component(0).abs().maxCoeff();
    r.n_l2 = l2_norm(s.n);
    if (s.u.components() > 0) {
      r.u_l2 = l2_norm(s.u);
      r.div_l2 = l2_norm(divergence(s.u, s.frame.drift));
      r.bar_u2 = s.u.coeffs()(0, 1).real();
    }
    r.tail_ratio = tail_ratio(s.n, p.shear);
    std::optional<KappaRho> q;
    if (d != nullptr) {
      const SpectralField u10 = zero_mode(s.u).extract(0);
      SpectralField sum = d->G1 + d->B1 + d->B2;
      const double ref = l2_norm(u10);
      const double err = l2_norm(sum - u10);
      r.decomposition_error = ref > 0.0 ? err / ref : err;
      r.bar_B1 = d->B1.coeffs()(0, 0).real();
      r.bar_B2 = d->B2.coeffs()(0, 0).real();
      q = compute_kappa_rho(d->U2(), p.A);
      r.min_dyV = q->dyV.component(0).minCoeff();
    }
    if (opt.ledger) {
      ledger_update(ledger, s, d, q ? &*q : nullptr);
      r.E = energy_report(ledger);
    }
    if (opt.free_energy) {
      try {
        r.free_energy = s.n.grid().dim == 2 ? free_energy(s.n, s.frame.drift)
                                            : free_energy(zero_mode(s.n));
      } catch (const DomainError&) {
        r.free_energy = std::numeric_limits<double>::quiet_NaN();
      }
    }
    r.dropped_energy = s.dropped_energy;
    r.dt = dt;
    r.status = st;
    return r;
  }
};

bool reached(double t, double target) {
  return t >= target - 1e-12 * std::max(1.0, std::abs(target));
}

}  // namespace

RunResult run(const Params& p, const State& init, const RunOptions& opt) {
  p.validate();
  if (!(init.n.grid() == p.grid)) throw ContractViolation("run: state grid differs from params");
  if (!(init.mass() > 0.0)) throw ContractViolation("run: initial mass must be positive");
  if (!(opt.output_every > 0.0)) throw ContractViolation("run: output_every must be > 0");

  Integrator integ(p);
  RunResult res;
  State s = init;
  std::optional<DecompositionState> d;
  if (s.u.components() > 0 && opt.decomposition) d = init_decomposition(s.u);
  DecompositionState* dp = d ? &*d : nullptr;
  Sampler sampler{p, opt, EnergyLedger(p)};

  const double linf0 = inverse_transform(s.n).component(0).abs().maxCoeff();
  const double trigger = p.linf_factor * linf0;

  // Sample times are k * output_every on an absolute grid so that a resumed
  // run takes the same steps as an uninterrupted one.
  long k_out = static_cast<long>(std::floor(s.t / opt.output_every + 1e-9)) + 1;
  long k_ck = opt.checkpoint_every > 0.0
                  ? static_cast<long>(std::floor(s.t / opt.checkpoint_every + 1e-9)) + 1
                  : 0;
  double last_dt = 0.0;
  res.last_resolved_t = s.t;

  auto finish = [&](RunStatus st, const std::string& why, bool sample) {
    res.status = st;
    res.reason = why;
    res.t_event = s.t;
    if (sample) {
      try {
        res.series.push_back(sampler.row(s, dp, last_dt, st));
      } catch (const NumericalAbort&) {
      }
    }
  };

  try {
    res.series.push_back(sampler.row(s, dp, 0.0, RunStatus::running));
  } catch (const NumericalAbort& e) {
    finish(RunStatus::unresolved, e.what(), false);
  }

  while (res.status == RunStatus::running) {
    if (reached(s.t, p.t_end)) {
      finish(RunStatus::suppressed, "t_end reached", false);
      if (!res.series.empty()) res.series.back().status = RunStatus::suppressed;
      break;
    }
    if (opt.max_steps > 0 && res.steps >= opt.max_steps) {
      finish(RunStatus::running, "step limit", true);
      break;
    }
    const double t_out = static_cast<double>(k_out) * opt.output_every;
    double t_stop = std::min(t_out, p.t_end);
    double t_ck = std::numeric_limits<double>::infinity();
    if (opt.checkpoint_every > 0.0) {
      t_ck = static_cast<double>(k_ck) * opt.checkpoint_every;
      t_stop = std::min(t_stop, t_ck);
    }
    StepInfo info;
    try {
      info = integ.step(s, dp, t_stop);
    } catch (const NumericalAbort& e) {
      finish(RunStatus::unresolved, e.what(), true);
      break;
    }
    ++res.steps;
    last_dt = info.dt;

    const RealField nphys = inverse_transform(s.n);
    const double nmin = nphys.component(0).minCoeff();
    const double linf = nphys.component(0).abs().maxCoeff();
    const double tail = std::max(tail_ratio(s.n, p.shear), tail_ratio(s.u, p.shear));
    if (nmin < -p.positivity_tol * linf) {
      finish(RunStatus::unresolved, "positivity lost", true);
      break;
    }
    if (tail > p.tail_ratio_max) {
      finish(RunStatus::unresolved, "spectral tail above threshold", true);
      break;
    }
    if (s.dropped_energy > p.drop_bound) {
      finish(RunStatus::unresolved, "remap loss above bound", true);
      break;
    }
    res.last_resolved_t = s.t;
    if (linf >= trigger) {
      finish(RunStatus::blowup, "L-infinity growth trigger", true);
      break;
    }

    const bool at_out = reached(s.t, t_out);
    const bool at_end = reached(s.t, p.t_end);
    if (at_out || at_end) {
      try {
        res.series.push_back(sampler.row(s, dp, last_dt, RunStatus::running));
      } catch (const NumericalAbort& e) {
        finish(RunStatus::unresolved, e.what(), false);
        break;
      }
      while (reached(s.t, static_cast<double>(k_out) * opt.output_every)) ++k_out;
    }
    if (opt.checkpoint_every > 0.0 && reached(s.t, t_ck)) {
      if (opt.on_checkpoint) opt.on_checkpoint(s);
      while (reached(s.t, static_cast<double>(k_ck) * opt.checkpoint_every)) ++k_ck;
    }
  }

  res.final_state = std::move(s);
  res.decomposition = std::move(d);
  return res;
}

bool min_principle_check(const std::vector<SeriesRow>& series, double delta, double nbar,
                         double A, double slack) {
  for (const auto& r : series) {
    if (r.n_min < delta * std::exp(-nbar * r.t / A) - slack) return false;
  }
  return true;
}

}  // namespace pksns
