#include <cmath>
#include <random>

#include "doctest.h"
#include "pksns/errors.hpp"
#include "pksns/fft.hpp"
#include "pksns/spectral.hpp"

using namespace pksns;

namespace {

const double kPi = std::numbers::pi;

SpectralField sample(const GridSpec& g, auto&& f) {
  return forward_transform(RealField::sample(g, f));
}

// Smooth random real field: random coefficients in a low band, symmetrized.
SpectralField random_field(const GridSpec& g, unsigned seed, int comps = 1, int band = 5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  SpectralField F(g, comps);
  for (Eigen::Index i = 0; i < F.modes(); ++i) {
    const auto k = g.wavevector(static_cast<std::size_t>(i));
    if (std::abs(k[0]) > band || std::abs(k[1]) > band || std::abs(k[2]) > band) continue;
    for (int c = 0; c < comps; ++c) F.coeffs()(i, c) = Complex(U(rng), U(rng));
  }
  enforce_hermitian(F);
  return F;
}

double quadrature_l2_sq(const RealField& f) {
  return f.values().square().sum() * f.grid().cell_volume();
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(GridSpec::make(2, {63, 64, 1}), ContractViolation);
  CHECK_THROWS_AS(GridSpec::make(4, {8, 8, 8}), ContractViolation);
  CHECK_THROWS_AS(GridSpec::make(2, {6, 8, 1}), ContractViolation);
  const auto g = GridSpec::make(3, {24, 24, 24});
  CHECK(g.cutoff(0) == 8);
  CHECK(g.volume() == doctest::Approx(std::pow(2 * kPi, 3)));
}

TEST_CASE("transform of sin x has one conjugate pair") {
  const auto g = GridSpec::make(2, {16, 16, 1});
  const auto F = sample(g, [](double x, double, double) { return std::sin(x); });
  CHECK(std::abs(F.at({1, 0, 0}) - Complex(0, -0.5)) < 1e-15);
  CHECK(std::abs(F.at({-1, 0, 0}) - Complex(0, 0.5)) < 1e-15);
  double rest = F.coeffs().abs2().sum() - 0.5;
  CHECK(std::abs(rest) < 1e-15);
}

TEST_CASE("constant field maps to the zero coefficient") {
  const auto g = GridSpec::make(3, {8, 8, 8});
  const auto F = sample(g, [](double, double, double) { return 1.0; });
  CHECK(std::abs(F.coeffs()(0, 0) - Complex(1, 0)) < 1e-15);
  CHECK(F.coeffs().bottomRows(F.modes() - 1).abs().maxCoeff() < 1e-15);
}

TEST_CASE("roundtrip of random real field") {
  const auto g = GridSpec::make(3, {16, 12, 10});
  std::mt19937_64 rng(7);
  std::normal_distribution<double> N(0, 1);
  RealField f(g);
  for (Eigen::Index i = 0; i < f.values().rows(); ++i) f.values()(i, 0) = N(rng);
  const RealField back = inverse_transform(forward_transform(f));
  CHECK((back.values() - f.values()).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("derivatives and laplacian") {
  const auto g = GridSpec::make(2, {32, 32, 1});
  const auto S = sample(g, [](double x, double, double) { return std::sin(x); });
  const auto dS = inverse_transform(derivative(S, 0));
  const auto cosx = RealField::sample(g, [](double x, double, double) { return std::cos(x); });
  CHECK((dS.values() - cosx.values()).abs().maxCoeff() <= 1e-13);

  const auto C = sample(g, [](double, double y, double) { return std::cos(y); });
  const auto L = inverse_transform(laplacian(C));
  const auto cosy = inverse_transform(C);
  CHECK((L.values() + cosy.values()).abs().maxCoeff() <= 1e-13);

  CHECK_THROWS_WITH_AS(derivative(S, 2), "derivative: axis out of range", ContractViolation);
}

TEST_CASE("derivative commutes with transform roundtrip") {
  const auto g = GridSpec::make(3, {16, 16, 16});
  const auto F = random_field(g, 3);
  const auto G = forward_transform(inverse_transform(F));
  for (int a = 0; a < 3; ++a) {
    CHECK((derivative(F, a).coeffs() - derivative(G, a).coeffs()).abs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("chemo solve") {
  const auto g = GridSpec::make(2, {32, 32, 1});
  SUBCASE("constant density") {
    const auto n = sample(g, [](double, double, double) { return 2.5; });
    CHECK(solve_chemo(n).coeffs().abs().maxCoeff() == 0.0);
  }
  SUBCASE("cosine perturbation solves the equation pointwise") {
    const auto n = sample(g, [](double, double y, double) { return 1.0 + std::cos(y); });
    const auto c = inverse_transform(solve_chemo(n));
    const auto expect = RealField::sample(g, [](double, double y, double) { return std::cos(y); });
    CHECK((c.values() - expect.values()).abs().maxCoeff() <= 1e-14);
    // Delta c + n - nbar via finite quadrature of the spectral Laplacian.
    const auto lap = inverse_transform(laplacian(solve_chemo(n)));
    const auto nn = inverse_transform(n);
    CHECK((lap.values() + nn.values() - 1.0).abs().maxCoeff() <= 1e-13);
  }
  SUBCASE("random density residual and contraction") {
    for (unsigned s = 0; s < 5; ++s) {
      auto n = random_field(g, 100 + s);
      n.coeffs()(0, 0) = 3.0;
      const auto c = solve_chemo(n);
      SpectralField r = laplacian(c) + n;
      r.coeffs()(0, 0) -= 3.0;
      CHECK(l2_norm(r) <= 1e-12 * l2_norm(n));
      SpectralField nt = n;
      nt.coeffs()(0, 0) = 0.0;
      CHECK(l2_norm(c) <= l2_norm(nt));
      // linearity
      const auto c2 = solve_chemo(2.0 * n + n);
      CHECK((c2.coeffs() - 3.0 * c.coeffs()).abs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("leray projection") {
  const auto g3 = GridSpec::make(3, {16, 16, 16});
  SUBCASE("gradients are annihilated") {
    const auto g = GridSpec::make(2, {32, 32, 1});
    const auto phi = sample(g, [](double x, double y, double) { return std::sin(x + y); });
    const auto P = leray_project(gradient(phi));
    CHECK(P.coeffs().bottomRows(P.modes() - 1).abs().maxCoeff() < 1e-15);
  }
  SUBCASE("solenoidal fields are unchanged") {
    const auto g = GridSpec::make(2, {32, 32, 1});
    const auto psi = random_field(g, 11);
    SpectralField u(g, 2);
    u.assign(0, -1.0 * derivative(psi, 1));
    u.assign(1, derivative(psi, 0));
    CHECK((leray_project(u).coeffs() - u.coeffs()).abs().maxCoeff() <= 1e-13);
  }
  SUBCASE("projector properties on random fields, sheared frame too") {
    for (double drift : {0.0, 0.37, -0.8}) {
      const auto u = random_field(g3, 21, 3);
      const auto Pu = leray_project(u, drift);
      CHECK(l2_norm(divergence(Pu, drift)) <= 1e-12 * l2_norm(u));
      CHECK((leray_project(Pu, drift).coeffs() - Pu.coeffs()).abs().maxCoeff() < 1e-14);
      CHECK(l2_norm(Pu) <= l2_norm(u) * (1 + 1e-14));
      const auto v = random_field(g3, 22, 3);
      CHECK(inner(Pu, v) == doctest::Approx(inner(u, leray_project(v, drift))).epsilon(1e-12));
      CHECK((Pu.coeffs().row(0) - u.coeffs().row(0)).abs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("dealias") {
  const auto g = GridSpec::make(2, {24, 24, 1});
  const auto low = random_field(g, 5, 1, 8);
  CHECK((dealias(low).coeffs() - low.coeffs()).abs().maxCoeff() == 0.0);
  SpectralField nyq(g);
  nyq.at({-12, 0, 0}) = 1.0;
  CHECK(dealias(nyq).coeffs().abs().maxCoeff() == 0.0);
  const auto full = random_field(g, 6, 1, 12);
  CHECK(l2_norm(dealias(full)) <= l2_norm(full));
  SpectralField edge(g);
  edge.at({8, 3, 0}) = 1.0;
  edge.at({9, 3, 0}) = 1.0;
  const auto d = dealias(edge);
  CHECK(d.at({8, 3, 0}) == Complex(1.0));
  CHECK(d.at({9, 3, 0}) == Complex(0.0));
}

TEST_CASE("norms") {
  const auto g = GridSpec::make(2, {32, 32, 1});
  const auto S = sample(g, [](double x, double, double) { return std::sin(x); });
  // integral of sin^2 over the square is 2 pi^2
  CHECK(std::abs(norms(S).l2 - std::sqrt(2 * kPi * kPi)) <= 1e-10);
  CHECK(std::abs(norms(S).l2 - 4.4429) < 1e-4);
  const auto one = sample(g, [](double, double, double) { return 1.0; });
  CHECK(norms(one).linf == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mixed_norm(S, {true, false, false}) == doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-12));
  const auto r = norms(S);
  CHECK(r.min == doctest::Approx(-1.0));
  CHECK(r.h1 == doctest::Approx(std::sqrt(2.0) * r.l2));
}

TEST_CASE("Parseval across grids") {
  for (const auto& g : {GridSpec::make(2, {32, 16, 1}), GridSpec::make(3, {12, 16, 8})}) {
    for (unsigned s = 0; s < 4; ++s) {
      const auto F = random_field(g, 40 + s, 1, 3);
      const double from_coeffs = l2_norm_sq(F);
      const double quad = quadrature_l2_sq(inverse_transform(F));
      CHECK(std::abs(from_coeffs - quad) <= 1e-10 * quad);
    }
  }
}

TEST_CASE("hermitian symmetry enforcement") {
  const auto g = GridSpec::make(3, {8, 10, 12});
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N(0, 1);
  SpectralField F(g, 2);
  for (Eigen::Index i = 0; i < F.modes(); ++i)
    for (int c = 0; c < 2; ++c) F.coeffs()(i, c) = Complex(N(rng), N(rng));
  enforce_hermitian(F);
  CHECK(hermitian_defect(F) <= 1e-15);
  CHECK(std::abs(F.coeffs()(0, 0).imag()) <= 1e-14);
  CHECK(F.at({-4, 1, 1}) == Complex(0.0));
}
