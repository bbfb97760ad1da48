#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "pksns/field.hpp"

namespace pksns {

/// Per-grid lookup tables, built once and shared.
struct ModeTable {
  std::array<Eigen::ArrayXd, 3> k;          // integer wavevector components
  std::array<Eigen::ArrayXd, 3> not_nyquist;  // 0 on an axis's Nyquist plane, else 1
  Eigen::ArrayXd keep;                      // 1 inside the dealiased band
  Eigen::ArrayXd resolved;                  // 1 unless some axis is at Nyquist
  std::vector<Eigen::Index> conj;           // flat index of -k
};
const ModeTable& mode_table(const GridSpec& grid);

/// Wavevectors of every stored mode, seen in a frame sheared by `drift`:
/// the y-component of mode (k1, k2, k3) is k2 - k1 * drift. With drift = 0
/// these are the plain integer wavevectors.
struct Wavenumbers {
  explicit Wavenumbers(const GridSpec& grid, double drift = 0.0);

  GridSpec grid;
  double drift = 0.0;
  std::array<Eigen::ArrayXd, 3> k;      // effective components
  std::array<Eigen::ArrayXd, 3> deriv;  // k with Nyquist entries zeroed
  Eigen::ArrayXd k_sq;
};

SpectralField derivative(const SpectralField& F, int axis, double drift = 0.0);
SpectralField laplacian(const SpectralField& F, double drift = 0.0);
/// dim-component gradient of a scalar field.
SpectralField gradient(const SpectralField& F, double drift = 0.0);
/// Scalar divergence of a dim-component field.
SpectralField divergence(const SpectralField& U, double drift = 0.0);

/// Chemoattractant from Delta c + n - nbar = 0, gauge mean(c) = 0.
SpectralField solve_chemo(const SpectralField& n, double drift = 0.0);

/// Orthogonal projection onto divergence-free fields; the mean is untouched.
SpectralField leray_project(const SpectralField& U, double drift = 0.0);

/// 2/3-rule truncation: zero every mode with |k_axis| > floor(n_axis / 3).
SpectralField dealias(const SpectralField& F);
void dealias_in_place(SpectralField& F);

/// Copy coefficients by wavevector onto another grid of the same
/// dimension; modes that do not fit (and source Nyquist modes) are dropped.
SpectralField resample(const SpectralField& F, const GridSpec& target);

/// Replace F(k) by (F(k) + conj F(-k)) / 2 and clear Nyquist planes.
void enforce_hermitian(SpectralField& F);
/// max_k |F(k) - conj F(-k)| / max_k |F(k)| (0 for a zero field).
double hermitian_defect(const SpectralField& F);

double l2_norm_sq(const SpectralField& F);
double l2_norm(const SpectralField& F);
/// Real L2 inner product int f.g over the torus.
double inner(const SpectralField& F, const SpectralField& G);
/// ||grad F||^2 using effective wavenumbers.
double gradient_norm_sq(const SpectralField& F, double drift = 0.0);
/// Sobolev norm with weight (1 + |k|^2)^s.
double sobolev_norm(const SpectralField& F, int s, double drift = 0.0);

struct NormReport {
  double l2 = 0.0;
  double linf = 0.0;  // max |f| over collocation points
  double min = 0.0;   // min of component 0 over collocation points
  double h1 = 0.0;
};

NormReport norms(const SpectralField& F, double drift = 0.0);

/// L^inf over the axes flagged in `sup_axes` of the L^2 norm over the
/// remaining axes, evaluated on the collocation grid (scalar fields).
double mixed_norm(const SpectralField& F, const std::array<bool, 3>& sup_axes);

}  // namespace pksns
