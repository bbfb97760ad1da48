#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>

#include "pksns/grid.hpp"

namespace pksns {

using Complex = std::complex<double>;

/// Fourier coefficients of a real (scalar or vector) field.
///
/// Coefficients follow f = sum_k fhat_k e^{i k.x} with
/// fhat_k = |T|^{-d} int f e^{-i k.x}, so a constant field 1 has fhat_0 = 1.
/// Column c of coeffs() holds component c.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const GridSpec& grid, int components = 1)
      : grid_(grid),
        coeffs_(Eigen::ArrayXXcd::Zero(static_cast<Eigen::Index>(grid.size()),
                                       components)) {}

  const GridSpec& grid() const { return grid_; }
  int components() const { return static_cast<int>(coeffs_.cols()); }
  Eigen::Index modes() const { return coeffs_.rows(); }

  Eigen::ArrayXXcd& coeffs() { return coeffs_; }
  const Eigen::ArrayXXcd& coeffs() const { return coeffs_; }
  auto component(int c) { return coeffs_.col(c); }
  auto component(int c) const { return coeffs_.col(c); }

  Complex& at(const std::array<int, 3>& k, int c = 0) {
    return coeffs_(static_cast<Eigen::Index>(grid_.flat_k(k)), c);
  }
  const Complex& at(const std::array<int, 3>& k, int c = 0) const {
    return coeffs_(static_cast<Eigen::Index>(grid_.flat_k(k)), c);
  }

  /// Single-component view copied out of a vector field.
  SpectralField extract(int c) const;
  void assign(int c, const SpectralField& scalar);

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s) {
    coeffs_ *= s;
    return *this;
  }

 private:
  GridSpec grid_;
  Eigen::ArrayXXcd coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Samples of a real field on the collocation grid x_j = j * 2pi / n.
class RealField {
 public:
  RealField() = default;
  explicit RealField(const GridSpec& grid, int components = 1)
      : grid_(grid),
        values_(Eigen::ArrayXXd::Zero(static_cast<Eigen::Index>(grid.size()),
                                      components)) {}

  const GridSpec& grid() const { return grid_; }
  int components() const { return static_cast<int>(values_.cols()); }
  Eigen::ArrayXXd& values() { return values_; }
  const Eigen::ArrayXXd& values() const { return values_; }
  auto component(int c) { return values_.col(c); }
  auto component(int c) const { return values_.col(c); }

  /// Physical coordinates of a flat grid index.
  std::array<double, 3> point(std::size_t flat_index) const;

  template <typename F>
  static RealField sample(const GridSpec& grid, F&& f) {
    RealField r(grid, 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto p = r.point(i);
      r.values_(static_cast<Eigen::Index>(i), 0) = f(p[0], p[1], p[2]);
    }
    return r;
  }

 private:
  GridSpec grid_;
  Eigen::ArrayXXd values_;
};

}  // namespace pksns
