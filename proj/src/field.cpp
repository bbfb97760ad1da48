#include "pksns/field.hpp"

#include "pksns/errors.hpp"

namespace pksns {

namespace {
void require_same_shape(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components()) {
    throw ContractViolation("spectral field shape mismatch");
  }
}
}  // namespace

SpectralField SpectralField::extract(int c) const {
  if (c < 0 || c >= components()) {
    throw ContractViolation("component index out of range");
  }
  SpectralField out(grid_, 1);
  out.coeffs_.col(0) = coeffs_.col(c);
  return out;
}

void SpectralField::assign(int c, const SpectralField& scalar) {
  if (c < 0 || c >= components() || !(scalar.grid() == grid_)) {
    throw ContractViolation("assign: component or grid mismatch");
  }
  coeffs_.col(c) = scalar.coeffs_.col(0);
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_shape(*this, o);
  coeffs_ += o.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_shape(*this, o);
  coeffs_ -= o.coeffs_;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) {
  a += b;
  return a;
}
SpectralField operator-(SpectralField a, const SpectralField& b) {
  a -= b;
  return a;
}
SpectralField operator*(double s, SpectralField a) {
  a *= s;
  return a;
}

std::array<double, 3> RealField::point(std::size_t flat_index) const {
  const auto& n = grid_.n;
  const std::size_t i2 = flat_index % n[2];
  const std::size_t rest = flat_index / n[2];
  const std::size_t i1 = rest % n[1];
  const std::size_t i0 = rest / n[1];
  return {grid_.spacing(0) * static_cast<double>(i0),
          n[1] > 1 ? grid_.spacing(1) * static_cast<double>(i1) : 0.0,
          n[2] > 1 ? grid_.spacing(2) * static_cast<double>(i2) : 0.0};
}

}  // namespace pksns
