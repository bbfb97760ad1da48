#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pksns/field.hpp"

namespace pksns {

/// Deterministic generator of test fields. Normals come from Box-Muller on
/// raw 64-bit draws so that streams agree across standard libraries.
class FieldSampler {
 public:
  explicit FieldSampler(std::uint64_t seed, double spectrum_slope = 3.0)
      : rng_(seed), slope_(spectrum_slope) {}

  double uniform();  // (0, 1]
  double normal();

  /// Zero-mean real field with |f(k)| ~ |k|^-slope for |k_i| <= band.
  /// Coefficients depend on the band, not on the grid, so the same seed
  /// gives the same trigonometric polynomial on any grid that holds it.
  SpectralField random(const GridSpec& grid, int band = 8);

  /// Periodized Gaussian of the given width and total mass; a fraction
  /// `background` of the mass is spread uniformly.
  static SpectralField gaussian_bump(const GridSpec& grid, double width,
                                     const std::array<double, 3>& center, double mass,
                                     double background = 0.0);
  /// amplitude * cos(k.x) (or sin with `sine`).
  static SpectralField single_mode(const GridSpec& grid, const std::array<int, 3>& k,
                                   double amplitude = 1.0, bool sine = false);

 private:
  std::mt19937_64 rng_;
  double slope_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct CheckReport {
  std::string name;
  bool pass = false;
  double extremal = 0.0;         // largest ratio seen
  std::size_t extremal_index = 0;
  std::string descriptor;        // which ratio of which sample
  std::size_t samples = 0;
};

/// ||Delta c0|| / ||n0|| and ||dx^j Delta c_neq|| / ||dx^j n_neq||, j = 0..2.
CheckReport check_elliptic(const std::vector<SpectralField>& samples);
/// ||f|| / ||dx f|| over samples with zero x-average.
CheckReport check_poincare(const std::vector<SpectralField>& samples);

/// int n log n - (1/2)(n - nbar) c for a positive density on a torus of
/// any dimension (a 2D field or a 3D zero mode). Throws DomainError if n
/// is not positive on the grid.
double free_energy(const SpectralField& n, double drift = 0.0);

struct FreeEnergyPoint {
  double t = 0.0;
  double value = 0.0;
};
/// Samples of the free energy along a pure 2D Keller-Segel run (no shear,
/// no flow, A = 1) started from `n_init`.
std::vector<FreeEnergyPoint> free_energy_series(const SpectralField& n_init, double t_end,
                                                double every);

/// int f log f + (2/m) iint f(x) f(y) log d(x,y) on a 2D grid with the
/// minimal-image distance, summed directly over all pairs.
double loghls_functional(const SpectralField& f);

struct LogHlsOptions {
  int n = 64;
  std::vector<double> widths{1.0, 0.5, 0.25, 0.125};
  std::vector<std::uint64_t> seeds{1, 2};
  int random_per_seed = 4;
  double background = 1e-6;  // uniform share of the mass; keeps log f finite
};

struct LogHlsReport {
  double mass = 0.0;
  std::vector<double> widths;
  std::vector<double> bump_values;
  std::vector<double> running_min;      // over the bump family, coarse to fine
  std::vector<double> seed_minima;      // min over bumps and that seed's random fields
  double minimum = 0.0;
  double last_drop = 0.0;  // relative decrease of the running min at the finest level
  double finest_drop = 0.0;  // same for the bump values themselves
  bool pass = false;
};
LogHlsReport loghls_scan(double m, const LogHlsOptions& opt = {});

/// theta = (1/r - 1/q) / (1/n - 1/2 + 1/r); DomainError outside the
/// admissible range.
double gns_theta(int n, double q, double r);
/// ||f||_q / (||grad f||_2^theta ||f||_r^(1-theta)) by grid quadrature.
double gns_quotient(const SpectralField& f, double q, double r);

struct GnsReport {
  double theta = 0.0;
  double max_coarse = 0.0;  // 64^2
  double max_fine = 0.0;    // 128^2
  std::size_t extremal_index = 0;
  bool pass = false;
};
GnsReport gns_ratio(double q, double r, int samples = 24, std::uint64_t seed = 7);

}  // namespace pksns
