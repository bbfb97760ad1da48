#include "pksns/grid.hpp"

#include <cmath>
#include <string>

#include "pksns/errors.hpp"

namespace pksns {

GridSpec GridSpec::make(int dim, std::array<int, 3> modes) {
  if (dim != 2 && dim != 3) {
    throw ContractViolation("grid dimension must be 2 or 3, got " +
                            std::to_string(dim));
  }
  GridSpec g;
  g.dim = dim;
  for (int a = 0; a < 3; ++a) {
    if (a < dim) {
      if (modes[a] < 8 || modes[a] % 2 != 0) {
        throw ContractViolation("n_modes must be even and >= 8 on axis " +
                                std::to_string(a) + ", got " +
                                std::to_string(modes[a]));
      }
      g.n[a] = modes[a];
    } else {
      g.n[a] = 1;
    }
  }
  return g;
}

GridSpec GridSpec::cross_section() const {
  if (dim < 2) throw ContractViolation("cross-section of a 1D grid");
  GridSpec g;
  g.dim = dim - 1;
  g.n = {n[1], n[2], 1};
  return g;
}

double GridSpec::volume() const { return std::pow(kTwoPi, dim); }

std::array<int, 3> GridSpec::wavevector(std::size_t flat_index) const {
  const int i2 = static_cast<int>(flat_index % n[2]);
  const std::size_t rest = flat_index / n[2];
  const int i1 = static_cast<int>(rest % n[1]);
  const int i0 = static_cast<int>(rest / n[1]);
  return {wavenumber(0, i0), wavenumber(1, i1), wavenumber(2, i2)};
}

std::size_t GridSpec::conjugate_index(std::size_t flat_index) const {
  const auto k = wavevector(flat_index);
  return flat_k({-k[0], -k[1], -k[2]});
}

}  // namespace pksns
