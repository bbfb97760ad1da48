#include "pksns/nonlinear.hpp"

#include "pksns/errors.hpp"
#include "pksns/fft.hpp"

namespace pksns {

RealField to_physical(const SpectralField& F, bool truncate) {
  if (!truncate) return inverse_transform(F);
  const ModeTable& t = mode_table(F.grid());
  RealField f(F.grid(), F.components());
  Eigen::ArrayXcd col(F.modes());
  for (int c = 0; c < F.components(); ++c) {
    col = F.component(c) * t.keep;
    fft::inverse(F.grid(), col, f.component(c));
  }
  return f;
}

SpectralField pointwise_product(const RealField& a, const RealField& b, bool truncate) {
  if (!(a.grid() == b.grid()) || a.components() != 1 || b.components() != 1) {
    throw ContractViolation("pointwise_product: shape mismatch");
  }
  SpectralField out(a.grid(), 1);
  const Eigen::ArrayXd p = a.component(0) * b.component(0);
  fft::forward(a.grid(), p, out.component(0));
  if (truncate) out.component(0) *= mode_table(a.grid()).keep;
  return out;
}

SpectralField flux_divergence(const RealField& q, const RealField& v, double drift,
                              bool truncate) {
  const GridSpec& g = q.grid();
  if (!(v.grid() == g) || q.components() != 1 || v.components() < g.dim) {
    throw ContractViolation("flux_divergence: shape mismatch");
  }
  const Wavenumbers w(g, drift);
  const ModeTable& t = mode_table(g);
  SpectralField out(g, 1);
  Eigen::ArrayXd p(q.values().rows());
  Eigen::ArrayXcd hat(q.values().rows());
  const Complex I(0.0, 1.0);
  for (int a = 0; a < g.dim; ++a) {
    p = q.component(0) * v.component(a);
    fft::forward(g, p, hat);
    if (truncate) hat *= t.keep;
    out.component(0) += hat * (I * w.deriv[a]);
  }
  return out;
}

SpectralField momentum_advection(const RealField& u, double drift, bool truncate) {
  const GridSpec& g = u.grid();
  const int d = g.dim;
  if (u.components() != d) throw ContractViolation("momentum_advection: need dim components");
  const Wavenumbers w(g, drift);
  const ModeTable& t = mode_table(g);
  SpectralField out(g, d);
  Eigen::ArrayXd p(u.values().rows());
  Eigen::ArrayXcd hat(u.values().rows());
  const Complex I(0.0, 1.0);
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      p = u.component(a) * u.component(b);
      fft::forward(g, p, hat);
      if (truncate) hat *= t.keep;
      out.component(a) += hat * (I * w.deriv[b]);
      if (b != a) out.component(b) += hat * (I * w.deriv[a]);
    }
  }
  return out;
}

}  // namespace pksns
