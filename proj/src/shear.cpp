#include "pksns/shear.hpp"

#include <cmath>

#include "pksns/errors.hpp"
#include "pksns/spectral.hpp"

namespace pksns {

namespace {
constexpr double kDriftSlack = 1e-12;

double exponent(const std::array<int, 3>& k, double tau, double drift0, double A,
                double rate) {
  const double k1 = k[0];
  const double a = k[1] - k1 * drift0;
  const double b = rate * k1;
  const double sheared = a * a * tau - a * b * tau * tau + b * b * tau * tau * tau / 3.0;
  return ((k1 * k1 + static_cast<double>(k[2]) * k[2]) * tau + sheared) / A;
}
}  // namespace

std::array<double, 3> effective_wavevector(const std::array<int, 3>& k, double drift) {
  return {static_cast<double>(k[0]), k[1] - k[0] * drift, static_cast<double>(k[2])};
}

double integrating_factor(const std::array<int, 3>& k, double t0, double t1,
                          double drift0, double A, double shear_rate) {
  if (t1 < t0) throw ContractViolation("integrating_factor: t1 < t0");
  return std::exp(-exponent(k, t1 - t0, drift0, A, shear_rate));
}

LinearPropagator::LinearPropagator(double A_, double dt_, double rate)
    : A(A_), dt(dt_), shear_rate(rate) {
  if (!(A >= 1.0)) throw ContractViolation("LinearPropagator: A must be >= 1");
  if (!(dt > 0.0)) throw ContractViolation("LinearPropagator: dt must be > 0");
}

Eigen::ArrayXd LinearPropagator::factors(const GridSpec& grid, double drift0) const {
  const ModeTable& t = mode_table(grid);
  const Eigen::ArrayXd a = t.k[1] - drift0 * t.k[0];
  const Eigen::ArrayXd b = shear_rate * t.k[0];
  const Eigen::ArrayXd e =
      (t.k[0].square() + t.k[2].square() + a.square()) * dt - a * b * (dt * dt) +
      b.square() * (dt * dt * dt / 3.0);
  return (-e / A).exp();
}

void LinearPropagator::apply(SpectralField& F, ShearFrame& frame) const {
  apply_all({&F}, frame);
}

void LinearPropagator::apply_all(std::initializer_list<SpectralField*> fields,
                                 ShearFrame& frame) const {
  const double next = frame.drift + shear_rate * dt;
  if (std::abs(next) > 1.0 + kDriftSlack) {
    throw ContractViolation("drift beyond one wavenumber per k1 without remap");
  }
  if (fields.size() == 0) {
    frame.drift = next;
    return;
  }
  const Eigen::ArrayXd f = factors((*fields.begin())->grid(), frame.drift);
  for (SpectralField* F : fields) {
    for (int c = 0; c < F->components(); ++c) F->component(c) *= f;
  }
  frame.drift = next;
}

double remap_in_place(SpectralField& F, long shift) {
  if (shift == 0) return 0.0;
  const GridSpec& g = F.grid();
  if (g.dim < 2) throw ContractViolation("remap needs a y axis");
  const int n1 = g.n[1];
  Eigen::ArrayXXcd out = Eigen::ArrayXXcd::Zero(F.modes(), F.components());
  double dropped = 0.0;
  for (Eigen::Index i = 0; i < F.modes(); ++i) {
    const auto k = g.wavevector(static_cast<std::size_t>(i));
    const long k2 = static_cast<long>(k[1]) - static_cast<long>(k[0]) * shift;
    if (k2 <= -n1 / 2 || k2 >= n1 / 2) {
      dropped += F.coeffs().row(i).abs2().sum();
      continue;
    }
    const auto j = static_cast<Eigen::Index>(g.flat_k({k[0], static_cast<int>(k2), k[2]}));
    out.row(j) = F.coeffs().row(i);
  }
  F.coeffs() = std::move(out);
  return dropped * g.volume();
}

RemapResult remap(const SpectralField& F, const ShearFrame& frame) {
  RemapResult r{F, frame, 0.0};
  if (std::abs(frame.drift) < 1.0 - kDriftSlack) return r;
  const long shift = std::lround(frame.drift);
  r.dropped_energy = remap_in_place(r.field, shift);
  r.frame.drift = frame.drift - static_cast<double>(shift);
  return r;
}

ShearedField exact_scalar_evolve(const SpectralField& F0, double t, double A,
                                 const ShearFrame& frame0) {
  if (t < 0.0) throw ContractViolation("exact_scalar_evolve: negative time");
  ShearedField out{F0, frame0};
  double remaining = t;
  double now = frame0.t_last_remap + frame0.drift;
  while (remaining > 0.0) {
    const double room = 1.0 - out.frame.drift;
    const double tau = remaining <= room ? remaining : room;
    if (tau > 0.0) LinearPropagator(A, tau, 1.0).apply(out.field, out.frame);
    remaining = tau == remaining ? 0.0 : remaining - tau;
    now += tau;
    if (out.frame.drift >= 1.0 - kDriftSlack) {
      auto r = remap(out.field, out.frame);
      out.field = std::move(r.field);
      out.frame = r.frame;
      out.frame.t_last_remap = now - out.frame.drift;
    }
  }
  return out;
}

}  // namespace pksns
