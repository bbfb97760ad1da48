#include "pksns/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "pksns/decomposition.hpp"
#include "pksns/diagnostics.hpp"
#include "pksns/errors.hpp"
#include "pksns/fft.hpp"
#include "pksns/io.hpp"
#include "pksns/spectral.hpp"

namespace pksns {

namespace {

void make_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

SpectralField scaled_to(SpectralField f, double norm) {
  const double now = l2_norm(f);
  if (now > 0.0) f *= norm / now;
  return f;
}

}  // namespace

SpectralField build_density(const RunConfig& cfg, double mass) {
  const DensityInit& d = cfg.init;
  const GridSpec& g = cfg.params.grid;
  if (d.kind == "file") {
    const Checkpoint ck = read_checkpoint(d.path);
    if (!(ck.state.n.grid() == g)) throw ConfigError("init_path: checkpoint grid differs");
    return ck.state.n;
  }
  if (!(mass > 0.0)) throw ConfigError("mass: must be > 0");
  const double nbar = mass / g.volume();
  if (d.kind == "gaussian") {
    return FieldSampler::gaussian_bump(g, d.width, d.center, mass, d.background);
  }
  SpectralField f(g, 1);
  if (d.kind == "random") {
    FieldSampler s(d.seed, d.spectrum_slope);
    f = s.random(g, d.band);
    const double peak = inverse_transform(f).component(0).abs().maxCoeff();
    if (peak > 0.0) f *= d.amplitude * nbar / peak;
  } else if (d.kind == "mode") {
    f = FieldSampler::single_mode(g, d.k, d.amplitude * nbar);
  } else {
    throw ConfigError("init: unknown kind " + d.kind);
  }
  f.coeffs()(0, 0) = nbar;
  return f;
}

SpectralField build_velocity(const RunConfig& cfg) {
  const Params& p = cfg.params;
  if (!p.has_fluid()) return SpectralField(p.grid, 0);
  SpectralField u(p.grid, 3);
  const VelocityInit& v = cfg.u_init;
  if (v.kind == "zero") {
    u.coeffs()(0, 1) = v.mean_u2;
    return u;
  }
  const GridSpec cs = p.grid.cross_section();
  FieldSampler s(v.seed, v.spectrum_slope);
  // (u2,0, u3,0) = (d_z psi, -d_y psi) is divergence-free on the cross-section
  const SpectralField psi = s.random(cs, v.band);
  SpectralField u20 = embed_zero_mode(derivative(psi, 1), p.grid);
  SpectralField u30 = embed_zero_mode(derivative(psi, 0), p.grid);
  u30 *= -1.0;
  const double size = sobolev_norm(u20, 2) + sobolev_norm(u30, 1);
  if (size > 0.0) {
    u20 *= v.eps / size;
    u30 *= v.eps / size;
  }
  const SpectralField u10 = scaled_to(embed_zero_mode(s.random(cs, v.band), p.grid),
                                      v.u1_amplitude);
  SpectralField w(p.grid, 3);
  for (int c = 0; c < 3; ++c) w.component(c) = s.random(p.grid, v.band).component(0);
  w = scaled_to(leray_project(nonzero_mode(w)), v.nonzero_amplitude);

  u.component(0) = u10.component(0);
  u.component(1) = u20.component(0);
  u.component(2) = u30.component(0);
  u.coeffs() += w.coeffs();
  u.coeffs()(0, 1) = v.mean_u2;
  return u;
}

State initial_state(const RunConfig& cfg) {
  return make_state(cfg.params, build_density(cfg, cfg.init.mass), build_velocity(cfg));
}

RunOptions run_options(const RunConfig& cfg) {
  RunOptions o;
  o.output_every = cfg.output_every;
  o.ledger = cfg.ledger;
  o.decomposition = cfg.decomposition;
  o.checkpoint_every = cfg.checkpoint_every;
  o.max_steps = cfg.max_steps;
  return o;
}

SimulateOutput scenario_simulate(const RunConfig& cfg, const State& init) {
  make_dir(cfg.output_dir);
  SimulateOutput out;
  RunOptions opt = run_options(cfg);
  if (cfg.checkpoint_every > 0.0) {
    opt.on_checkpoint = [&](const State& s) {
      char name[64];
      std::snprintf(name, sizeof name, "ckpt_%06ld.pksn",
                    std::lround(s.t / cfg.checkpoint_every));
      const std::string path = join(cfg.output_dir, name);
      write_checkpoint(path, s, cfg.params.A);
      out.checkpoints.push_back(path);
    };
  }
  out.result = run(cfg.params, init, opt);
  out.series_path = join(cfg.output_dir, "series.csv");
  write_series(out.series_path, out.result.series);
  write_checkpoint(join(cfg.output_dir, "final.pksn"), out.result.final_state, cfg.params.A);
  return out;
}

SimulateOutput scenario_simulate(const RunConfig& cfg) {
  return scenario_simulate(cfg, initial_state(cfg));
}

SimulateOutput scenario_resume(const RunConfig& cfg, const std::string& checkpoint) {
  const Checkpoint ck = read_checkpoint(checkpoint);
  RunConfig c = cfg;
  const GridSpec& g = ck.state.n.grid();
  c.dim = g.dim;
  for (int a = 0; a < 3; ++a) c.modes[a] = a < g.dim ? g.n[a] : c.modes[a];
  c.params.A = ck.A;
  c.params.fluid = ck.state.u.components() == 3;
  finalize(c);
  if (!(ck.state.t < c.params.t_end)) {
    throw ConfigError("t_end: checkpoint is already at t = " + std::to_string(ck.state.t));
  }
  return scenario_simulate(c, ck.state);
}

SweepReport scenario_sweep_mass(const RunConfig& cfg) {
  if (cfg.masses.empty()) throw ConfigError("masses: required (non-empty list) for sweep_mass");
  make_dir(cfg.output_dir);
  SweepReport rep;
  rep.entries.resize(cfg.masses.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.masses.size()) return;
      try {
        RunConfig c = cfg;
        c.output_dir = join(cfg.output_dir, "mass_" + std::to_string(i));
        c.init.mass = cfg.masses[i];
        const State init = make_state(c.params, build_density(c, c.init.mass), build_velocity(c));
        const SimulateOutput o = scenario_simulate(c, init);
        SweepEntry& e = rep.entries[i];
        e.mass = cfg.masses[i];
        e.status = o.result.status;
        e.reason = o.result.reason;
        e.t_event = o.result.t_event;
        e.last_resolved_t = o.result.last_resolved_t;
        const double linf0 = o.result.series.front().n_linf;
        for (const auto& r : o.result.series) e.peak_ratio = std::max(e.peak_ratio, r.n_linf / linf0);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cfg.masses.size();
        return;
      }
    }
  };
  unsigned n = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                               : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(cfg.masses.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < n; ++k) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& e : rep.entries) {
    if (e.status == RunStatus::suppressed) lo = std::max(lo, e.mass);
    if (e.status == RunStatus::blowup) hi = std::min(hi, e.mass);
  }
  rep.bracketed = std::isfinite(lo) && std::isfinite(hi) && lo < hi;
  rep.lo = lo;
  rep.hi = hi;

  std::string text = "mass,status,t_event,last_resolved_t,peak_ratio,reason\n";
  for (const auto& e : rep.entries) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g,%.17g,", e.mass, status_name(e.status),
                  e.t_event, e.last_resolved_t, e.peak_ratio);
    text += buf + e.reason + "\n";
  }
  const std::string path = join(cfg.output_dir, "sweep.csv");
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw IoError(path + ": cannot open for writing");
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok) throw IoError(path + ": write failed");
  return rep;
}

double decay_time(const Params& p, const SpectralField& n0, double level) {
  Params q = p;
  q.chemotaxis = false;
  q.fluid = false;
  q.positivity_tol = std::numeric_limits<double>::infinity();
  State s = make_state(q, n0);
  const double start = l2_norm(nonzero_mode(n0));
  if (!(start > 0.0)) throw ContractViolation("decay_time: initial data has no x-dependence");
  const double target = std::log(level);
  Integrator integ(q);
  double t_prev = s.t, r_prev = 0.0;
  while (s.t < q.t_end) {
    integ.step(s, nullptr, q.t_end);
    const double r = std::log(l2_norm(nonzero_mode(s.n)) / start);
    if (r <= target) return t_prev + (s.t - t_prev) * (target - r_prev) / (r - r_prev);
    t_prev = s.t;
    r_prev = r;
  }
  throw NumericalAbort("decay_time: level not reached by t_end");
}

RateReport scenario_rate_fit(const RunConfig& cfg) {
  RateReport rep;
  for (double A : cfg.amplitudes) {
    Params p = cfg.params;
    p.A = A;
    p.shear = true;
    p.fixed_dt = true;
    const double scale = std::cbrt(A);
    p.dt_max = std::min(cfg.params.dt_max, 0.005 * scale);
    p.t_end = std::max(cfg.params.t_end, 20.0 * scale);
    RunConfig c = cfg;
    c.params = p;
    const SpectralField n0 = build_density(c, cfg.init.mass);
    RatePoint pt;
    pt.A = A;
    pt.t_star = decay_time(p, n0, std::exp(-0.5));
    pt.rate = 0.5 / pt.t_star;
    rep.points.push_back(pt);
  }
  const double m = static_cast<double>(rep.points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& pt : rep.points) {
    const double x = std::log(pt.A), y = std::log(pt.rate);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  rep.intercept = (sy - rep.slope * sx) / m;
  return rep;
}

namespace {

CheckReport identity_report(const RunConfig& cfg) {
  const GridSpec cs = cfg.dim == 3 ? cfg.params.grid.cross_section()
                                   : GridSpec::make(2, {32, 32, 1});
  const double A = std::max(cfg.params.A, 1.0);
  FieldSampler s(cfg.init.seed, 3.0);
  CheckReport rep;
  rep.name = "kappa_rho_identity";
  rep.descriptor = "residual / max |grad kappa||grad f|";
  rep.samples = static_cast<std::size_t>(cfg.samples);
  for (int i = 0; i < cfg.samples; ++i) {
    SpectralField U2 = s.random(cs, std::min(6, cs.n[0] / 2 - 1));
    const double g = std::max(inverse_transform(derivative(U2, 0)).values().abs().maxCoeff(),
                              inverse_transform(derivative(U2, 1)).values().abs().maxCoeff());
    U2 *= 0.1 * A / (std::sqrt(2.0) * g);
    const KappaRho q = compute_kappa_rho(U2, A);
    const double r = kappa_identity_residual(q, s.random(cs, std::min(8, cs.n[0] / 2 - 1)));
    if (r >= rep.extremal) {
      rep.extremal = r;
      rep.extremal_index = static_cast<std::size_t>(i);
    }
  }
  rep.pass = rep.extremal <= 1e-10;
  return rep;
}

CheckReport free_energy_report(const RunConfig& cfg) {
  const GridSpec g = GridSpec::make(2, {64, 64, 1});
  const double m = 6.0 * std::numbers::pi;
  const auto n0 = FieldSampler::gaussian_bump(g, 0.5, {std::numbers::pi, std::numbers::pi, 0.0},
                                              m, cfg.init.background);
  const auto series = free_energy_series(n0, 1.0, 0.02);
  CheckReport rep;
  rep.name = "free_energy_decay";
  rep.descriptor = "largest relative increase between samples (m = 6 pi)";
  rep.samples = series.size();
  rep.extremal = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double up = (series[i].value - series[i - 1].value) / std::abs(series[i - 1].value);
    if (up > rep.extremal) {
      rep.extremal = up;
      rep.extremal_index = i;
    }
  }
  rep.pass = std::isfinite(rep.extremal) && rep.extremal <= 1e-6;
  return rep;
}

std::vector<SpectralField> random_batch(const GridSpec& g, int count, std::uint64_t seed,
                                        double mean, bool nonzero) {
  FieldSampler s(seed, 2.0);
  std::vector<SpectralField> out;
  const int band = std::min(6, std::min(g.n[0], g.n[1]) / 2 - 1);
  for (int i = 0; i < count; ++i) {
    SpectralField f = s.random(g, band);
    if (nonzero) {
      f = nonzero_mode(f);
    } else {
      f.coeffs()(0, 0) = mean;
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

std::vector<CheckReport> scenario_check(const RunConfig& cfg) {
  std::vector<CheckReport> out;
  const bool all = cfg.suite == "all";
  const GridSpec g3 = cfg.dim == 3 ? cfg.params.grid : GridSpec::make(3, {16, 16, 16});
  if (all || cfg.suite == "elliptic") {
    out.push_back(check_elliptic(random_batch(g3, cfg.samples, cfg.init.seed, 1.0, false)));
  }
  if (all || cfg.suite == "poincare") {
    out.push_back(check_poincare(random_batch(cfg.params.grid, cfg.samples, cfg.init.seed, 0.0, true)));
  }
  if (all || cfg.suite == "loghls") {
    const double m = cfg.init.mass > 0.0 ? cfg.init.mass : 4.0 * std::numbers::pi;
    const LogHlsReport r = loghls_scan(m);
    CheckReport c;
    c.name = "loghls";
    c.pass = r.pass;
    c.extremal = r.minimum;
    c.samples = r.bump_values.size() + r.seed_minima.size();
    std::ostringstream d;
    d.precision(8);
    d << "minimum F at m = " << m << "; bumps";
    for (double v : r.bump_values) d << ' ' << v;
    d << "; running-min drop " << r.last_drop << ", finest drop " << r.finest_drop;
    c.descriptor = d.str();
    out.push_back(c);
  }
  if (all || cfg.suite == "gns") {
    const GnsReport r = gns_ratio(3.0, 1.0, std::max(2, std::min(cfg.samples, 48)), cfg.init.seed);
    CheckReport c;
    c.name = "gns";
    c.pass = r.pass;
    c.extremal = r.max_coarse;
    c.extremal_index = r.extremal_index;
    c.samples = static_cast<std::size_t>(std::max(2, std::min(cfg.samples, 48)));
    std::ostringstream d;
    d.precision(8);
    d << "q = 3, r = 1, theta = " << r.theta << "; max at 64^2 " << r.max_coarse << ", at 128^2 "
      << r.max_fine;
    c.descriptor = d.str();
    out.push_back(c);
  }
  if (all || cfg.suite == "identities") {
    out.push_back(identity_report(cfg));
    out.push_back(free_energy_report(cfg));
  }
  return out;
}

std::string format_check(const CheckReport& r) {
  std::ostringstream s;
  s.precision(10);
  s << r.name << ' ' << (r.pass ? "PASS" : "FAIL") << " extremal=" << r.extremal << " sample="
    << r.extremal_index << " (" << r.descriptor << ") samples=" << r.samples;
  return s.str();
}

}  // namespace pksns
