#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace pksns {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform Fourier grid on the torus [0, 2pi)^dim.
///
/// Axis 0 is x (the shear direction), axis 1 is y, axis 2 is z. Unused axes
/// carry one mode. Wavevectors are stored in FFT order along each axis
/// (0, 1, ..., n/2-1, -n/2, ..., -1) and flattened row-major with axis 0
/// slowest. Cross-section grids of a 2D/3D grid are built by dropping axis 0,
/// so dim 1 occurs only for zero modes of 2D fields.
struct GridSpec {
  int dim = 2;
  std::array<int, 3> n{1, 1, 1};

  /// Validated constructor for simulation grids (dim 2 or 3, even n >= 8).
  static GridSpec make(int dim, std::array<int, 3> modes);

  /// Grid on the (d-1)-dimensional cross-section orthogonal to x.
  GridSpec cross_section() const;

  std::size_t size() const {
    return static_cast<std::size_t>(n[0]) * n[1] * n[2];
  }
  int cutoff(int axis) const { return n[axis] / 3; }
  double spacing(int axis) const { return kTwoPi / n[axis]; }
  double volume() const;
  double cell_volume() const { return volume() / static_cast<double>(size()); }

  int wavenumber(int axis, int index) const {
    if (n[axis] == 1) return 0;
    return index < n[axis] / 2 ? index : index - n[axis];
  }
  int index_of(int axis, int k) const {
    int m = k % n[axis];
    return m < 0 ? m + n[axis] : m;
  }
  bool is_nyquist(int axis, int k) const {
    return n[axis] > 1 && k == -n[axis] / 2;
  }

  std::size_t flat(int i0, int i1, int i2) const {
    return (static_cast<std::size_t>(i0) * n[1] + i1) * n[2] + i2;
  }
  std::size_t flat_k(const std::array<int, 3>& k) const {
    return flat(index_of(0, k[0]), index_of(1, k[1]), index_of(2, k[2]));
  }
  std::array<int, 3> wavevector(std::size_t flat_index) const;
  /// Flat index of -k (the Hermitian partner).
  std::size_t conjugate_index(std::size_t flat_index) const;

  bool operator==(const GridSpec&) const = default;
};

}  // namespace pksns
