#pragma once

#include <array>

#include "pksns/field.hpp"

namespace pksns {

/// Bookkeeping for the drifting-wave frame of y d/dx advection.
///
/// A stored coefficient at integer index (k1, k2, k3) represents the physical
/// wave with wavevector (k1, k2 - k1 * drift, k3). `drift` is the shear
/// accumulated since the last remap; a remap folds its integer part back
/// into the stored k2 indices.
struct ShearFrame {
  double t_last_remap = 0.0;
  double drift = 0.0;
};

std::array<double, 3> effective_wavevector(const std::array<int, 3>& k, double drift);

/// exp(-(1/A) int_{t0}^{t1} |k_eff(s)|^2 ds) where the drift runs from
/// drift0 at rate shear_rate. The integral is evaluated in closed form.
double integrating_factor(const std::array<int, 3>& k, double t0, double t1,
                          double drift0, double A, double shear_rate = 1.0);

/// Exact solution operator of d_t + s y d_x - (1/A) Delta over one step.
struct LinearPropagator {
  LinearPropagator(double A, double dt, double shear_rate = 1.0);

  double A;
  double dt;
  double shear_rate;

  /// Multiplies every mode by its integrating factor and advances the drift.
  /// The drift may not pass 1 (one grid wavenumber per k1) without a remap.
  void apply(SpectralField& F, ShearFrame& frame) const;
  /// Same factors for several fields sharing one frame; advances it once.
  void apply_all(std::initializer_list<SpectralField*> fields, ShearFrame& frame) const;
  /// The per-mode factor array for a given starting drift.
  Eigen::ArrayXd factors(const GridSpec& grid, double drift0) const;
};

struct RemapResult {
  SpectralField field;
  ShearFrame frame;
  double dropped_energy = 0.0;  // L2^2 of modes pushed out of the band
};

/// Shift stored k2 indices by -k1 * round(drift) and keep the fractional
/// drift. Modes landing at |k2| >= n2/2 are dropped and their energy
/// reported. A frame with |drift| < 1 is returned unchanged.
RemapResult remap(const SpectralField& F, const ShearFrame& frame);
/// In-place variant for the solver; returns dropped energy. `shift` is the
/// integer drift folded into the indices.
double remap_in_place(SpectralField& F, long shift);

struct ShearedField {
  SpectralField field;
  ShearFrame frame;
};

/// Exact solution of d_t f + y d_x f - (1/A) Delta f = 0 after time t,
/// remapping whenever the drift reaches 1.
ShearedField exact_scalar_evolve(const SpectralField& F0, double t, double A,
                                 const ShearFrame& frame0 = {});

}  // namespace pksns
