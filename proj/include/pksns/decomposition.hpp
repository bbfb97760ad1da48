#pragma once

#include "pksns/field.hpp"

namespace pksns {

/// f = f0 + fneq with f0 the x-average, stored on the cross-section grid.
struct XSplit {
  SpectralField zero_mode;    // (d-1)-dimensional
  SpectralField fluctuation;  // full grid, no k1 = 0 content
};

/// f0 = bar + tilde with bar the full spatial average.
struct BarTilde {
  double bar = 0.0;
  SpectralField tilde;
};

/// Both splits at once.
struct ModeSplit {
  SpectralField zero_mode;
  SpectralField fluctuation;
  double bar = 0.0;
  SpectralField tilde;
};

XSplit split_x(const SpectralField& f);
BarTilde split_bar_tilde(const SpectralField& f0);
ModeSplit split_modes(const SpectralField& f);

/// Coefficients with k1 = 0 only, as a cross-section field.
SpectralField zero_mode(const SpectralField& f);
/// Full-grid field whose x-average is f0 and fluctuation vanishes.
SpectralField embed_zero_mode(const SpectralField& f0, const GridSpec& full);
/// f - P0 f on the full grid.
SpectralField nonzero_mode(const SpectralField& f);

}  // namespace pksns
