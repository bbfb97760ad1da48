#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pksns/decomposition.hpp"
#include "pksns/errors.hpp"
#include "pksns/fft.hpp"
#include "pksns/inequality.hpp"
#include "pksns/spectral.hpp"

using namespace pksns;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField sample(const GridSpec& g, auto&& f) {
  return forward_transform(RealField::sample(g, f));
}

// Shift a field by whole grid cells along each axis.
SpectralField shifted(const SpectralField& F, int s0, int s1) {
  const RealField f = inverse_transform(F);
  const GridSpec& g = F.grid();
  RealField out(g, 1);
  for (int i = 0; i < g.n[0]; ++i) {
    for (int j = 0; j < g.n[1]; ++j) {
      out.values()(static_cast<Eigen::Index>(g.flat((i + s0) % g.n[0], (j + s1) % g.n[1], 0)), 0) =
          f.values()(static_cast<Eigen::Index>(g.flat(i, j, 0)), 0);
    }
  }
  return forward_transform(out);
}

}  // namespace

TEST_CASE("field sampler") {
  const auto g = GridSpec::make(2, {32, 32, 1});
  FieldSampler a(5), b(5);
  const auto fa = a.random(g, 6), fb = b.random(g, 6);
  CHECK((fa.coeffs() - fb.coeffs()).abs().maxCoeff() == 0.0);
  CHECK(hermitian_defect(fa) <= 1e-15);
  CHECK(std::abs(fa.coeffs()(0, 0)) == 0.0);
  SUBCASE("the same polynomial on a finer grid") {
    FieldSampler c(5);
    const auto fine = c.random(GridSpec::make(2, {64, 64, 1}), 6);
    CHECK((resample(fa, fine.grid()).coeffs() - fine.coeffs()).abs().maxCoeff() == 0.0);
  }
  SUBCASE("bump has the requested mass") {
    for (double bg : {0.0, 0.1}) {
      const auto f = FieldSampler::gaussian_bump(g, 0.4, {1.0, 2.0, 0.0}, 3.0, bg);
      CHECK(f.coeffs()(0, 0).real() * g.volume() == doctest::Approx(3.0).epsilon(1e-14));
      const auto v = inverse_transform(f).values();
      CHECK(v.minCoeff() > (bg > 0.0 ? 0.0 : -1e-14 * v.maxCoeff()));
    }
    CHECK_THROWS_AS(FieldSampler::gaussian_bump(g, -1.0, {0, 0, 0}, 1.0), ContractViolation);
  }
  SUBCASE("single mode") {
    const auto f = FieldSampler::single_mode(g, {2, 1, 0}, 0.5, true);
    const auto want = RealField::sample(g, [](double x, double y, double) {
      return 0.5 * std::sin(2 * x + y);
    });
    CHECK((inverse_transform(f).values() - want.values()).abs().maxCoeff() < 1e-14);
  }
  SUBCASE("uniform draws lie in (0, 1]") {
    FieldSampler s(9);
    for (int i = 0; i < 1000; ++i) {
      const double u = s.uniform();
      CHECK(u > 0.0);
      CHECK(u <= 1.0);
    }
  }
}

TEST_CASE("elliptic estimates") {
  const auto g = GridSpec::make(3, {16, 16, 16});
  SUBCASE("constant zero mode") {
    const auto n = sample(g, [](double, double, double) { return 2.0; });
    const auto rep = check_elliptic({n});
    CHECK(rep.pass);
    CHECK(rep.extremal == 0.0);
  }
  SUBCASE("n0 = 1 + cos y") {
    const auto n = sample(g, [](double, double y, double) { return 1.0 + std::cos(y); });
    const double lc = l2_norm(laplacian(solve_chemo(zero_mode(n))));
    const double n0 = l2_norm(zero_mode(n));
    // both norms live on the (y,z) cross-section
    const double vol = 4 * kPi * kPi;
    CHECK(lc * lc == doctest::Approx(n0 * n0 - vol).epsilon(1e-12));
    const auto rep = check_elliptic({n});
    CHECK(rep.pass);
    CHECK(rep.extremal < 1.0);
  }
  SUBCASE("100 random samples") {
    FieldSampler s(17, 2.0);
    std::vector<SpectralField> batch;
    for (int i = 0; i < 100; ++i) {
      SpectralField f = s.random(g, 6);
      f.coeffs()(0, 0) = 1.0;
      batch.push_back(f);
    }
    const auto rep = check_elliptic(batch);
    CHECK(rep.pass);
    CHECK(rep.samples == 100);
    CHECK(rep.extremal <= 1.0 + 1e-10);
  }
}

TEST_CASE("Poincare for non-zero modes") {
  const auto g = GridSpec::make(2, {32, 32, 1});
  const auto s1 = sample(g, [](double x, double, double) { return std::sin(x); });
  const auto s2 = sample(g, [](double x, double, double) { return std::sin(2 * x); });
  CHECK(check_poincare({s1}).extremal == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(check_poincare({s2}).extremal == doctest::Approx(0.5).epsilon(1e-14));
  FieldSampler s(3, 2.0);
  std::vector<SpectralField> batch;
  for (int i = 0; i < 100; ++i) batch.push_back(nonzero_mode(s.random(g, 8)));
  const auto rep = check_poincare(batch);
  CHECK(rep.pass);
  CHECK(rep.extremal <= 1.0 + 1e-10);
  const auto bad = sample(g, [](double x, double y, double) { return std::sin(x) + std::cos(y); });
  CHECK_THROWS_AS(check_poincare({s1, bad}), ContractViolation);
}

TEST_CASE("free energy") {
  const auto g = GridSpec::make(2, {32, 32, 1});
  SUBCASE("constant density") {
    const double nbar = 1.7;
    const auto n = sample(g, [=](double, double, double) { return nbar; });
    CHECK(free_energy(n) == doctest::Approx(4 * kPi * kPi * nbar * std::log(nbar)).epsilon(1e-14));
  }
  SUBCASE("non-positive density") {
    const auto n = sample(g, [](double x, double, double) { return 1.0 + std::cos(x); });
    CHECK_THROWS_AS(free_energy(n), DomainError);
  }
  SUBCASE("translation and axis relabelling") {
    const auto n = FieldSampler::gaussian_bump(g, 0.6, {2.0, 3.5, 0.0}, 5.0, 0.1);
    const double F = free_energy(n);
    CHECK(free_energy(shifted(n, 5, 11)) == doctest::Approx(F).epsilon(1e-12));
    const RealField f = inverse_transform(n);
    RealField t(g, 1);
    for (int i = 0; i < 32; ++i) {
      for (int j = 0; j < 32; ++j) {
        t.values()(static_cast<Eigen::Index>(g.flat(j, i, 0)), 0) =
            f.values()(static_cast<Eigen::Index>(g.flat(i, j, 0)), 0);
      }
    }
    CHECK(free_energy(forward_transform(t)) == doctest::Approx(F).epsilon(1e-12));
  }
  SUBCASE("decreases along a sub-critical run") {
    const auto n = FieldSampler::gaussian_bump(GridSpec::make(2, {64, 64, 1}), 0.5,
                                               {kPi, kPi, 0.0}, 6 * kPi, 0.02);
    const auto series = free_energy_series(n, 1.0, 0.02);
    REQUIRE(series.size() == 51);
    for (std::size_t i = 1; i < series.size(); ++i) {
      CHECK(series[i].value <= series[i - 1].value + 1e-6 * std::abs(series[i - 1].value));
    }
    CHECK(series.back().value < series.front().value);
  }
}

TEST_CASE("log-HLS functional") {
  const auto g = GridSpec::make(2, {32, 32, 1});
  SUBCASE("uniform density") {
    const double m = 4 * kPi;
    const auto f = sample(g, [=](double, double, double) { return m / (4 * kPi * kPi); });
    CHECK(std::isfinite(loghls_functional(f)));
  }
  SUBCASE("translation invariance") {
    const auto f = FieldSampler::gaussian_bump(g, 0.5, {2.0, 3.0, 0.0}, 4 * kPi, 0.05);
    const double F = loghls_functional(f);
    CHECK(std::abs(loghls_functional(shifted(f, 7, 20)) - F) <= 1e-8 * std::abs(F));
  }
  SUBCASE("needs a positive density") {
    const auto f = sample(g, [](double x, double, double) { return std::cos(x); });
    CHECK_THROWS_AS(loghls_functional(f), DomainError);
  }
  SUBCASE("scan at m = 4 pi") {
    const auto rep = loghls_scan(4 * kPi);
    REQUIRE(rep.bump_values.size() == 4);
    // Below width 1/2 the bump no longer feels the torus and F is scale
    // invariant; the widest bump sits lower.
    for (std::size_t i = 2; i < 4; ++i) {
      CHECK(std::abs(rep.bump_values[i] - rep.bump_values[1]) <= 0.01 * rep.bump_values[1]);
    }
    CHECK(rep.bump_values[0] < rep.bump_values[1]);
    CHECK(rep.running_min.back() == rep.bump_values[0]);
    CHECK(rep.last_drop <= 0.01);
    CHECK(rep.finest_drop <= 0.01);
    CHECK(rep.pass);
    REQUIRE(rep.seed_minima.size() == 2);
    CHECK(std::abs(rep.seed_minima[0] - rep.seed_minima[1]) <=
          0.01 * std::abs(rep.minimum));
  }
}

TEST_CASE("Gagliardo-Nirenberg-Sobolev ratios") {
  CHECK(gns_theta(2, 3.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(gns_theta(1, 3.0, 1.0), DomainError);
  CHECK_THROWS_AS(gns_theta(2, 1.0, 3.0), DomainError);
  CHECK_THROWS_AS(gns_theta(2, INFINITY, 1.0), DomainError);
  CHECK_THROWS_AS(gns_theta(3, 12.0, 2.5), DomainError);
  const auto g = GridSpec::make(2, {64, 64, 1});
  const auto f = sample(g, [](double, double y, double) { return std::sin(y); });
  CHECK(std::isfinite(gns_quotient(f, 3.0, 1.0)));
  const auto rep = gns_ratio(3.0, 1.0, 12);
  CHECK(rep.theta == doctest::Approx(2.0 / 3.0));
  CHECK(rep.pass);
  CHECK(std::abs(rep.max_fine - rep.max_coarse) <= 0.05 * rep.max_coarse);
}
