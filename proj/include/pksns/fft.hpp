#pragma once

#include <Eigen/Core>

#include "pksns/field.hpp"

namespace pksns {

/// Forward transform with the 1/N normalization (coefficients are grid means
/// against e^{-ik.x}); the inverse is plain synthesis, so inverse(forward(f))
/// is the identity.
SpectralField forward_transform(const RealField& f);
RealField inverse_transform(const SpectralField& F);

namespace fft {

/// Single-column kernels used by the solver's inner loops.
void forward(const GridSpec& grid, const Eigen::Ref<const Eigen::ArrayXd>& values,
             Eigen::Ref<Eigen::ArrayXcd> coeffs);
void inverse(const GridSpec& grid, const Eigen::Ref<const Eigen::ArrayXcd>& coeffs,
             Eigen::Ref<Eigen::ArrayXd> values);

}  // namespace fft
}  // namespace pksns
