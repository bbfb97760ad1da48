#pragma once

#include "pksns/field.hpp"
#include "pksns/spectral.hpp"

namespace pksns {

/// Physical values of F, optionally truncated to the 2/3 band first.
RealField to_physical(const SpectralField& F, bool dealias);

/// div(q v) for a scalar q and a vector v given on the collocation grid,
/// with the product transformed back and truncated when `dealias` is set.
SpectralField flux_divergence(const RealField& q, const RealField& v, double drift,
                              bool dealias);

/// (u.grad) u in divergence form, sum_b d_b (u_b u_a), from physical u.
SpectralField momentum_advection(const RealField& u, double drift, bool dealias);

/// Spectral coefficients of the pointwise product a * b.
SpectralField pointwise_product(const RealField& a, const RealField& b, bool dealias);

}  // namespace pksns
