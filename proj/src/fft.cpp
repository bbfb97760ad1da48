#include "pksns/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "pksns/errors.hpp"

namespace pksns {
namespace {

// FFTW planning is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan plan_for(const GridSpec& grid, int sign) {
  using Key = std::tuple<int, int, int, int, int>;
  static std::map<Key, fftw_plan> plans;
  const Key key{grid.dim, grid.n[0], grid.n[1], grid.n[2], sign};
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;

  const int total = static_cast<int>(grid.size());
  auto* in = fftw_alloc_complex(total);
  auto* out = fftw_alloc_complex(total);
  // FFTW_ESTIMATE keeps plan selection (and hence round-off) deterministic.
  fftw_plan p = fftw_plan_dft(grid.dim, grid.n.data(), in, out, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  if (p == nullptr) throw ContractViolation("FFTW could not plan transform");
  plans.emplace(key, p);
  return p;
}

std::vector<Complex>& scratch(std::size_t n, int slot) {
  thread_local std::vector<Complex> buf[2];
  if (buf[slot].size() != n) buf[slot].assign(n, Complex(0.0, 0.0));
  return buf[slot];
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

namespace fft {

void forward(const GridSpec& grid, const Eigen::Ref<const Eigen::ArrayXd>& values,
             Eigen::Ref<Eigen::ArrayXcd> coeffs) {
  const std::size_t n = grid.size();
  if (static_cast<std::size_t>(values.size()) != n ||
      static_cast<std::size_t>(coeffs.size()) != n) {
    throw ContractViolation("forward transform: shape mismatch");
  }
  auto& in = scratch(n, 0);
  auto& out = scratch(n, 1);
  for (std::size_t i = 0; i < n; ++i) in[i] = Complex(values[static_cast<Eigen::Index>(i)], 0.0);
  fftw_execute_dft(plan_for(grid, FFTW_FORWARD), as_fftw(in.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) coeffs[static_cast<Eigen::Index>(i)] = out[i] * scale;
}

void inverse(const GridSpec& grid, const Eigen::Ref<const Eigen::ArrayXcd>& coeffs,
             Eigen::Ref<Eigen::ArrayXd> values) {
  const std::size_t n = grid.size();
  if (static_cast<std::size_t>(values.size()) != n ||
      static_cast<std::size_t>(coeffs.size()) != n) {
    throw ContractViolation("inverse transform: shape mismatch");
  }
  auto& in = scratch(n, 0);
  auto& out = scratch(n, 1);
  for (std::size_t i = 0; i < n; ++i) in[i] = coeffs[static_cast<Eigen::Index>(i)];
  fftw_execute_dft(plan_for(grid, FFTW_BACKWARD), as_fftw(in.data()), as_fftw(out.data()));
  for (std::size_t i = 0; i < n; ++i) values[static_cast<Eigen::Index>(i)] = out[i].real();
}

}  // namespace fft

SpectralField forward_transform(const RealField& f) {
  SpectralField F(f.grid(), f.components());
  for (int c = 0; c < f.components(); ++c) {
    fft::forward(f.grid(), f.component(c), F.component(c));
  }
  return F;
}

RealField inverse_transform(const SpectralField& F) {
  RealField f(F.grid(), F.components());
  for (int c = 0; c < F.components(); ++c) {
    fft::inverse(F.grid(), F.component(c), f.component(c));
  }
  return f;
}

}  // namespace pksns
