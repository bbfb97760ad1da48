#include "pksns/decomposition.hpp"

#include "pksns/errors.hpp"

namespace pksns {

SpectralField zero_mode(const SpectralField& f) {
  const GridSpec& g = f.grid();
  const GridSpec cs = g.cross_section();
  SpectralField out(cs, f.components());
  // Rows with k1 = 0 are the first n1*n2 flat indices.
  const auto count = static_cast<Eigen::Index>(cs.size());
  out.coeffs() = f.coeffs().topRows(count);
  return out;
}

SpectralField embed_zero_mode(const SpectralField& f0, const GridSpec& full) {
  if (!(full.cross_section() == f0.grid())) {
    throw ContractViolation("embed_zero_mode: cross-section grid mismatch");
  }
  SpectralField out(full, f0.components());
  out.coeffs().topRows(f0.modes()) = f0.coeffs();
  return out;
}

SpectralField nonzero_mode(const SpectralField& f) {
  SpectralField out = f;
  const auto count = static_cast<Eigen::Index>(f.grid().cross_section().size());
  out.coeffs().topRows(count).setZero();
  return out;
}

XSplit split_x(const SpectralField& f) {
  return {zero_mode(f), nonzero_mode(f)};
}

BarTilde split_bar_tilde(const SpectralField& f0) {
  if (f0.components() != 1) {
    throw ContractViolation("split_bar_tilde expects a scalar zero mode");
  }
  BarTilde out{f0.coeffs()(0, 0).real(), f0};
  out.tilde.coeffs()(0, 0) = Complex(0.0, 0.0);
  return out;
}

ModeSplit split_modes(const SpectralField& f) {
  auto xs = split_x(f);
  auto bt = split_bar_tilde(xs.zero_mode);
  return {std::move(xs.zero_mode), std::move(xs.fluctuation), bt.bar,
          std::move(bt.tilde)};
}

}  // namespace pksns
