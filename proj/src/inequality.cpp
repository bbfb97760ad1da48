#include "pksns/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pksns/decomposition.hpp"
#include "pksns/errors.hpp"
#include "pksns/fft.hpp"
#include "pksns/solver.hpp"
#include "pksns/spectral.hpp"

namespace pksns {

namespace {

// Correction for the trapezoid sum of g(x) log|x| on a square lattice of
// spacing h: the self term is g(0) h^2 (log h + kLatticeLog). Calibrated
// against wide Gaussians, for which int g log|x| is known in closed form.
constexpr double kLatticeLog = -1.3105329;

double lp_norm(const RealField& f, double p) {
  const double cell = f.grid().cell_volume();
  return std::pow(f.component(0).abs().pow(p).sum() * cell, 1.0 / p);
}

}  // namespace

double FieldSampler::uniform() {
  // 53 random bits mapped to (0, 1].
  return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
}

double FieldSampler::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double phi = kTwoPi * uniform();
  spare_ = r * std::sin(phi);
  have_spare_ = true;
  return r * std::cos(phi);
}

SpectralField FieldSampler::random(const GridSpec& g, int band) {
  for (int a = 0; a < g.dim; ++a) {
    if (band >= g.n[a] / 2) throw ContractViolation("FieldSampler: band does not fit the grid");
  }
  SpectralField F(g, 1);
  const int b1 = g.dim >= 2 ? band : 0;
  const int b2 = g.dim >= 3 ? band : 0;
  for (int k0 = -band; k0 <= band; ++k0) {
    for (int k1 = -b1; k1 <= b1; ++k1) {
      for (int k2 = -b2; k2 <= b2; ++k2) {
        const double re = normal();
        const double im = normal();
        if (k0 == 0 && k1 == 0 && k2 == 0) continue;
        const double kk = std::sqrt(static_cast<double>(k0 * k0 + k1 * k1 + k2 * k2));
        F.at({k0, k1, k2}) = std::pow(kk, -slope_) * Complex(re, im);
      }
    }
  }
  enforce_hermitian(F);
  return F;
}

SpectralField FieldSampler::gaussian_bump(const GridSpec& g, double width,
                                          const std::array<double, 3>& center, double mass,
                                          double background) {
  if (!(width > 0.0) || !(mass > 0.0) || background < 0.0 || background >= 1.0) {
    throw ContractViolation("gaussian_bump: need width > 0, mass > 0, background in [0,1)");
  }
  const double s2 = 2.0 * width * width;
  const int r1 = g.dim >= 2 ? 1 : 0;
  const int r2 = g.dim >= 3 ? 1 : 0;
  RealField f = RealField::sample(g, [&](double x, double y, double z) {
    double acc = 0.0;
    for (int a = -1; a <= 1; ++a) {
      for (int b = -r1; b <= r1; ++b) {
        for (int c = -r2; c <= r2; ++c) {
          const double dx = x - center[0] + kTwoPi * a;
          const double dy = g.dim >= 2 ? y - center[1] + kTwoPi * b : 0.0;
          const double dz = g.dim >= 3 ? z - center[2] + kTwoPi * c : 0.0;
          acc += std::exp(-(dx * dx + dy * dy + dz * dz) / s2);
        }
      }
    }
    return acc;
  });
  const double total = f.component(0).sum() * g.cell_volume();
  f.values() *= (1.0 - background) * mass / total;
  f.values() += background * mass / g.volume();
  return forward_transform(f);
}

SpectralField FieldSampler::single_mode(const GridSpec& g, const std::array<int, 3>& k,
                                        double amplitude, bool sine) {
  SpectralField F(g, 1);
  const bool zero = k[0] == 0 && k[1] == 0 && k[2] == 0;
  if (zero) {
    if (!sine) F.coeffs()(0, 0) = amplitude;
    return F;
  }
  const Complex c = sine ? Complex(0.0, -0.5 * amplitude) : Complex(0.5 * amplitude, 0.0);
  F.at(k) += c;
  F.at({-k[0], -k[1], -k[2]}) += std::conj(c);
  return F;
}

CheckReport check_elliptic(const std::vector<SpectralField>& samples) {
  CheckReport rep;
  rep.name = "elliptic";
  rep.samples = samples.size();
  auto consider = [&](double ratio, std::size_t i, const std::string& what) {
    if (ratio > rep.extremal || (i == 0 && rep.descriptor.empty())) {
      rep.extremal = ratio;
      rep.extremal_index = i;
      rep.descriptor = what;
    }
  };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const SpectralField& n = samples[i];
    const SpectralField n0 = zero_mode(n);
    const double d0 = l2_norm(n0);
    if (d0 > 0.0) consider(l2_norm(laplacian(solve_chemo(n0))) / d0, i, "Delta c0 / n0");
    const SpectralField nneq = nonzero_mode(n);
    SpectralField lc = nonzero_mode(laplacian(solve_chemo(n)));
    SpectralField nn = nneq;
    for (int j = 0; j <= 2; ++j) {
      const double den = l2_norm(nn);
      if (den > 0.0) {
        consider(l2_norm(lc) / den, i, "dx^" + std::to_string(j) + " Delta c_neq / n_neq");
      }
      lc = derivative(lc, 0);
      nn = derivative(nn, 0);
    }
  }
  rep.pass = rep.extremal <= 1.0 + 1e-10;
  return rep;
}

CheckReport check_poincare(const std::vector<SpectralField>& samples) {
  CheckReport rep;
  rep.name = "poincare";
  rep.samples = samples.size();
  rep.descriptor = "f_neq / dx f_neq";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const SpectralField& f = samples[i];
    const double total = l2_norm(f);
    if (l2_norm(zero_mode(f)) > 1e-12 * std::max(total, 1e-300)) {
      throw ContractViolation("check_poincare: sample " + std::to_string(i) +
                              " has a non-zero x-average");
    }
    const double dx = l2_norm(derivative(f, 0));
    const double ratio = dx > 0.0 ? total / dx : 0.0;
    if (ratio > rep.extremal) {
      rep.extremal = ratio;
      rep.extremal_index = i;
    }
  }
  rep.pass = rep.extremal <= 1.0 + 1e-10;
  return rep;
}

double free_energy(const SpectralField& n, double drift) {
  if (n.components() != 1) throw ContractViolation("free_energy needs a scalar density");
  const RealField f = inverse_transform(n);
  if (!(f.component(0).minCoeff() > 0.0)) {
    throw DomainError("free_energy: density must be positive");
  }
  const double entropy = (f.component(0) * f.component(0).log()).sum() * n.grid().cell_volume();
  SpectralField fluct = n;
  fluct.coeffs()(0, 0) = 0.0;
  const SpectralField c = solve_chemo(n, drift);
  return entropy - 0.5 * inner(fluct, c);
}

std::vector<FreeEnergyPoint> free_energy_series(const SpectralField& n_init, double t_end,
                                                double every) {
  Params p;
  p.grid = n_init.grid();
  p.A = 1.0;
  p.shear = false;
  p.fluid = false;
  p.t_end = t_end;
  RunOptions opt;
  opt.output_every = every;
  opt.ledger = false;
  const RunResult r = run(p, make_state(p, n_init), opt);
  std::vector<FreeEnergyPoint> out;
  for (const auto& row : r.series) out.push_back({row.t, row.free_energy});
  return out;
}

double loghls_functional(const SpectralField& F) {
  const GridSpec& g = F.grid();
  if (g.dim != 2 || F.components() != 1) throw ContractViolation("loghls: needs a 2D density");
  if (g.n[0] != g.n[1]) throw ContractViolation("loghls: needs a square grid");
  const RealField f = inverse_transform(F);
  if (!(f.component(0).minCoeff() > 0.0)) throw DomainError("loghls: density must be positive");
  const int n = g.n[0];
  const double h = g.spacing(0);
  const double cell = h * h;
  const auto& v = f.component(0);
  const double m = v.sum() * cell;

  // log of the minimal-image distance for every index offset
  Eigen::ArrayXXd table(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double dx = h * std::min(i, n - i);
      const double dy = h * std::min(j, n - j);
      table(i, j) = 0.5 * std::log(dx * dx + dy * dy);
    }
  }
  table(0, 0) = std::log(h) + kLatticeLog;

  double pair = 0.0;
  for (int i0 = 0; i0 < n; ++i0) {
    for (int i1 = 0; i1 < n; ++i1) {
      const double fx = v[static_cast<Eigen::Index>(g.flat(i0, i1, 0))];
      double inner_sum = 0.0;
      for (int j0 = 0; j0 < n; ++j0) {
        const int d0 = (j0 - i0 + n) % n;
        const Eigen::Index row = static_cast<Eigen::Index>(g.flat(j0, 0, 0));
        for (int j1 = 0; j1 < n; ++j1) {
          inner_sum += v[row + j1] * table(d0, (j1 - i1 + n) % n);
        }
      }
      pair += fx * inner_sum;
    }
  }
  pair *= cell * cell;
  const double entropy = (v * v.log()).sum() * cell;
  return entropy + 2.0 / m * pair;
}

LogHlsReport loghls_scan(double m, const LogHlsOptions& opt) {
  if (!(m > 0.0)) throw DomainError("loghls_scan: mass must be positive");
  const GridSpec g = GridSpec::make(2, {opt.n, opt.n, 1});
  LogHlsReport rep;
  rep.mass = m;
  rep.widths = opt.widths;
  double running = std::numeric_limits<double>::infinity();
  for (double w : opt.widths) {
    const double F = loghls_functional(
        FieldSampler::gaussian_bump(g, w, {std::numbers::pi, std::numbers::pi, 0.0}, m,
                                    opt.background));
    rep.bump_values.push_back(F);
    running = std::min(running, F);
    rep.running_min.push_back(running);
  }
  const double bump_min = running;
  for (std::uint64_t seed : opt.seeds) {
    FieldSampler s(seed, 2.0);
    double best = bump_min;
    for (int k = 0; k < opt.random_per_seed; ++k) {
      const SpectralField r = s.random(g, 6);
      const double peak = inverse_transform(r).component(0).abs().maxCoeff();
      SpectralField f = r;
      f *= peak > 0.0 ? 0.6 * m / g.volume() / peak : 0.0;
      f.coeffs()(0, 0) = m / g.volume();
      best = std::min(best, loghls_functional(f));
    }
    rep.seed_minima.push_back(best);
  }
  rep.minimum = *std::min_element(rep.seed_minima.begin(), rep.seed_minima.end());
  if (rep.running_min.size() >= 2) {
    const double a = rep.running_min[rep.running_min.size() - 2];
    const double b = rep.running_min.back();
    rep.last_drop = (a - b) / std::abs(a);
    const double c = rep.bump_values[rep.bump_values.size() - 2];
    rep.finest_drop = (c - rep.bump_values.back()) / std::abs(c);
  }
  rep.pass = std::isfinite(rep.minimum) && rep.last_drop <= 0.01 && rep.finest_drop <= 0.01;
  return rep;
}

double gns_theta(int n, double q, double r) {
  if (n < 2) throw DomainError("gns: dimension must be >= 2");
  if (!(r > 0.0) || !(q > r) || !std::isfinite(q)) {
    throw DomainError("gns: exponents must satisfy 0 < r < q < infinity");
  }
  const double den = 1.0 / n - 0.5 + 1.0 / r;
  if (!(den > 0.0)) throw DomainError("gns: requires 1/n - 1/2 + 1/r > 0");
  const double theta = (1.0 / r - 1.0 / q) / den;
  if (theta > 1.0) throw DomainError("gns: theta exceeds 1 for these exponents");
  return theta;
}

double gns_quotient(const SpectralField& F, double q, double r) {
  const double theta = gns_theta(F.grid().dim, q, r);
  const RealField f = inverse_transform(F);
  const double grad = std::sqrt(gradient_norm_sq(F));
  return lp_norm(f, q) / (std::pow(grad, theta) * std::pow(lp_norm(f, r), 1.0 - theta));
}

GnsReport gns_ratio(double q, double r, int samples, std::uint64_t seed) {
  GnsReport rep;
  rep.theta = gns_theta(2, q, r);
  const GridSpec coarse = GridSpec::make(2, {64, 64, 1});
  const GridSpec fine = GridSpec::make(2, {128, 128, 1});
  FieldSampler s(seed, 2.0);
  for (int i = 0; i < samples; ++i) {
    const SpectralField f = i == 0 ? FieldSampler::single_mode(coarse, {0, 1, 0}, 1.0, true)
                                   : s.random(coarse, 6);
    const double a = gns_quotient(f, q, r);
    const double b = gns_quotient(resample(f, fine), q, r);
    if (a > rep.max_coarse) {
      rep.max_coarse = a;
      rep.extremal_index = static_cast<std::size_t>(i);
    }
    rep.max_fine = std::max(rep.max_fine, b);
  }
  rep.pass = std::isfinite(rep.max_coarse) && std::isfinite(rep.max_fine) &&
             std::abs(rep.max_fine - rep.max_coarse) <= 0.05 * rep.max_coarse;
  return rep;
}

}  // namespace pksns
