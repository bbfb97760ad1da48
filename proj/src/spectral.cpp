#include "pksns/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "pksns/errors.hpp"
#include "pksns/fft.hpp"

namespace pksns {

const ModeTable& mode_table(const GridSpec& g) {
  static std::mutex m;
  static std::map<std::array<int, 4>, std::unique_ptr<ModeTable>> cache;
  const std::array<int, 4> key{g.dim, g.n[0], g.n[1], g.n[2]};
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[key];
  if (slot) return *slot;
  auto t = std::make_unique<ModeTable>();
  const auto n = static_cast<Eigen::Index>(g.size());
  for (int a = 0; a < 3; ++a) {
    t->k[a].resize(n);
    t->not_nyquist[a].resize(n);
  }
  t->keep.resize(n);
  t->resolved.resize(n);
  t->conj.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto kv = g.wavevector(static_cast<std::size_t>(i));
    bool keep = true;
    bool resolved = true;
    for (int a = 0; a < 3; ++a) {
      t->k[a][i] = kv[a];
      const bool nyq = g.is_nyquist(a, kv[a]);
      t->not_nyquist[a][i] = nyq ? 0.0 : 1.0;
      resolved = resolved && !nyq;
      if (a < g.dim) keep = keep && std::abs(kv[a]) <= g.cutoff(a);
    }
    t->keep[i] = keep ? 1.0 : 0.0;
    t->resolved[i] = resolved ? 1.0 : 0.0;
    t->conj[static_cast<std::size_t>(i)] =
        static_cast<Eigen::Index>(g.flat_k({-kv[0], -kv[1], -kv[2]}));
  }
  slot = std::move(t);
  return *slot;
}

Wavenumbers::Wavenumbers(const GridSpec& g, double d) : grid(g), drift(d) {
  const ModeTable& t = mode_table(g);
  k[0] = t.k[0];
  k[1] = t.k[1] - d * t.k[0];
  k[2] = t.k[2];
  for (int a = 0; a < 3; ++a) deriv[a] = k[a] * t.not_nyquist[a];
  k_sq = k[0].square() + k[1].square() + k[2].square();
}

SpectralField derivative(const SpectralField& F, int axis, double drift) {
  if (axis < 0 || axis >= F.grid().dim) {
    throw ContractViolation("derivative: axis out of range");
  }
  const Wavenumbers w(F.grid(), drift);
  SpectralField out(F.grid(), F.components());
  const Complex i(0.0, 1.0);
  for (int c = 0; c < F.components(); ++c) {
    out.component(c) = F.component(c) * (i * w.deriv[axis]);
  }
  return out;
}

SpectralField laplacian(const SpectralField& F, double drift) {
  const Wavenumbers w(F.grid(), drift);
  SpectralField out(F.grid(), F.components());
  for (int c = 0; c < F.components(); ++c) {
    out.component(c) = F.component(c) * (-w.k_sq);
  }
  return out;
}

SpectralField gradient(const SpectralField& F, double drift) {
  if (F.components() != 1) throw ContractViolation("gradient of a vector field");
  const Wavenumbers w(F.grid(), drift);
  const int d = F.grid().dim;
  SpectralField out(F.grid(), d);
  const Complex i(0.0, 1.0);
  for (int a = 0; a < d; ++a) out.component(a) = F.component(0) * (i * w.deriv[a]);
  return out;
}

SpectralField divergence(const SpectralField& U, double drift) {
  const int d = U.grid().dim;
  if (U.components() != d) {
    throw ContractViolation("divergence needs one component per axis");
  }
  const Wavenumbers w(U.grid(), drift);
  SpectralField out(U.grid(), 1);
  const Complex i(0.0, 1.0);
  for (int a = 0; a < d; ++a) out.component(0) += U.component(a) * (i * w.deriv[a]);
  return out;
}

SpectralField solve_chemo(const SpectralField& n, double drift) {
  if (n.components() != 1) throw ContractViolation("solve_chemo needs a scalar");
  const Wavenumbers w(n.grid(), drift);
  SpectralField c(n.grid(), 1);
  for (Eigen::Index i = 1; i < n.modes(); ++i) {
    c.coeffs()(i, 0) = n.coeffs()(i, 0) / w.k_sq[i];
  }
  return c;
}

SpectralField leray_project(const SpectralField& U, double drift) {
  const int d = U.grid().dim;
  if (U.components() != d) {
    throw ContractViolation("leray_project needs one component per axis");
  }
  const Wavenumbers w(U.grid(), drift);
  SpectralField out = U;
  for (Eigen::Index i = 1; i < U.modes(); ++i) {
    Complex kdotu(0.0, 0.0);
    for (int a = 0; a < d; ++a) kdotu += w.k[a][i] * U.coeffs()(i, a);
    const Complex s = kdotu / w.k_sq[i];
    for (int a = 0; a < d; ++a) out.coeffs()(i, a) -= w.k[a][i] * s;
  }
  return out;
}

void dealias_in_place(SpectralField& F) {
  const ModeTable& t = mode_table(F.grid());
  for (int c = 0; c < F.components(); ++c) F.component(c) *= t.keep;
}

SpectralField dealias(const SpectralField& F) {
  SpectralField out = F;
  dealias_in_place(out);
  return out;
}

SpectralField resample(const SpectralField& F, const GridSpec& target) {
  const GridSpec& g = F.grid();
  if (g.dim != target.dim) throw ContractViolation("resample: dimension mismatch");
  SpectralField out(target, F.components());
  const ModeTable& t = mode_table(g);
  for (Eigen::Index i = 0; i < F.modes(); ++i) {
    if (t.resolved[i] == 0.0) continue;
    const std::array<int, 3> k{static_cast<int>(t.k[0][i]), static_cast<int>(t.k[1][i]),
                               static_cast<int>(t.k[2][i])};
    bool fits = true;
    for (int a = 0; a < 3; ++a) {
      fits = fits && (target.n[a] == 1 ? k[a] == 0 : std::abs(k[a]) < target.n[a] / 2);
    }
    if (fits) out.coeffs().row(static_cast<Eigen::Index>(target.flat_k(k))) = F.coeffs().row(i);
  }
  return out;
}

void enforce_hermitian(SpectralField& F) {
  const ModeTable& t = mode_table(F.grid());
  auto& C = F.coeffs();
  for (Eigen::Index i = 0; i < F.modes(); ++i) {
    if (t.resolved[i] == 0.0) {
      C.row(i).setZero();
      continue;
    }
    const Eigen::Index j = t.conj[static_cast<std::size_t>(i)];
    if (j < i) continue;
    for (int c = 0; c < F.components(); ++c) {
      const Complex avg = 0.5 * (C(i, c) + std::conj(C(j, c)));
      C(i, c) = avg;
      C(j, c) = std::conj(avg);
    }
  }
}

double hermitian_defect(const SpectralField& F) {
  const auto& g = F.grid();
  const auto& C = F.coeffs();
  const double scale = C.abs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < F.modes(); ++i) {
    const auto j = static_cast<Eigen::Index>(g.conjugate_index(static_cast<std::size_t>(i)));
    for (int c = 0; c < F.components(); ++c) {
      worst = std::max(worst, std::abs(C(i, c) - std::conj(C(j, c))));
    }
  }
  return worst / scale;
}

double l2_norm_sq(const SpectralField& F) {
  return F.grid().volume() * F.coeffs().abs2().sum();
}

double l2_norm(const SpectralField& F) { return std::sqrt(l2_norm_sq(F)); }

double inner(const SpectralField& F, const SpectralField& G) {
  if (!(F.grid() == G.grid()) || F.components() != G.components()) {
    throw ContractViolation("inner: shape mismatch");
  }
  return F.grid().volume() * (F.coeffs() * G.coeffs().conjugate()).real().sum();
}

double gradient_norm_sq(const SpectralField& F, double drift) {
  const Wavenumbers w(F.grid(), drift);
  double s = 0.0;
  for (int c = 0; c < F.components(); ++c) s += (F.component(c).abs2() * w.k_sq).sum();
  return F.grid().volume() * s;
}

double sobolev_norm(const SpectralField& F, int s, double drift) {
  const Wavenumbers w(F.grid(), drift);
  const Eigen::ArrayXd weight = (1.0 + w.k_sq).pow(static_cast<double>(s));
  double acc = 0.0;
  for (int c = 0; c < F.components(); ++c) acc += (F.component(c).abs2() * weight).sum();
  return std::sqrt(F.grid().volume() * acc);
}

NormReport norms(const SpectralField& F, double drift) {
  NormReport r;
  r.l2 = l2_norm(F);
  r.h1 = std::sqrt(l2_norm_sq(F) + gradient_norm_sq(F, drift));
  const RealField f = inverse_transform(F);
  const Eigen::ArrayXd mag = f.values().square().rowwise().sum().sqrt();
  r.linf = mag.maxCoeff();
  r.min = f.component(0).minCoeff();
  return r;
}

double mixed_norm(const SpectralField& F, const std::array<bool, 3>& sup_axes) {
  if (F.components() != 1) throw ContractViolation("mixed_norm needs a scalar");
  const auto& g = F.grid();
  const RealField f = inverse_transform(F);
  // Index space of the sup axes; L2 over the rest.
  std::array<int, 3> sup_n{1, 1, 1};
  double cell = 1.0;
  for (int a = 0; a < g.dim; ++a) {
    if (sup_axes[a]) {
      sup_n[a] = g.n[a];
    } else {
      cell *= g.spacing(a);
    }
  }
  std::vector<double> acc(static_cast<std::size_t>(sup_n[0]) * sup_n[1] * sup_n[2], 0.0);
  for (int i0 = 0; i0 < g.n[0]; ++i0) {
    for (int i1 = 0; i1 < g.n[1]; ++i1) {
      for (int i2 = 0; i2 < g.n[2]; ++i2) {
        const double v = f.values()(static_cast<Eigen::Index>(g.flat(i0, i1, i2)), 0);
        const std::size_t s = (static_cast<std::size_t>(sup_axes[0] ? i0 : 0) * sup_n[1] +
                               (sup_axes[1] ? i1 : 0)) * sup_n[2] +
                              (sup_axes[2] ? i2 : 0);
        acc[s] += v * v;
      }
    }
  }
  return std::sqrt(*std::max_element(acc.begin(), acc.end()) * cell);
}

}  // namespace pksns
