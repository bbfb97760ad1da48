#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pksns/state.hpp"

namespace pksns {

/// Initial density. `kind` is gaussian, random, mode or file.
struct DensityInit {
  std::string kind = "gaussian";
  double mass = 0.0;  // required unless kind = file
  double width = 0.5;
  std::array<double, 3> center{3.141592653589793, 3.141592653589793, 3.141592653589793};
  double background = 0.02;  // uniform share of the mass (gaussian)
  double amplitude = 0.5;    // relative peak of the perturbation (random, mode)
  std::array<int, 3> k{1, 0, 0};
  std::uint64_t seed = 1;
  double spectrum_slope = 3.0;
  int band = 4;
  std::string path;  // checkpoint to take n from
};

/// Initial velocity perturbation (3D with fluid only). The zero-mode part
/// (u2,0, u3,0) comes from a random stream function scaled so that
/// ||u2,0||_H2 + ||u3,0||_H1 = eps.
struct VelocityInit {
  std::string kind = "zero";  // zero or random
  double eps = 0.0;
  double u1_amplitude = 0.0;   // L2 norm of the random u1,0 part
  double nonzero_amplitude = 0.0;  // L2 norm of the random non-zero modes
  double mean_u2 = 0.0;
  std::uint64_t seed = 2;
  double spectrum_slope = 3.0;
  int band = 4;
};

struct RunConfig {
  /// params.grid is rebuilt from `dim` and `modes` on every validation.
  Params params;
  int dim = 2;
  std::array<int, 3> modes{64, 64, 64};
  std::string scenario = "simulate";  // simulate, sweep_mass, rate_fit, check
  DensityInit init;
  VelocityInit u_init;
  double output_every = 0.1;
  double checkpoint_every = 0.0;
  long max_steps = 0;
  bool ledger = true;
  bool decomposition = true;
  std::string output_dir = "out";
  std::vector<double> masses;      // sweep_mass
  std::vector<double> amplitudes;  // rate_fit
  int workers = 0;                 // 0 = hardware concurrency
  std::string suite;               // check
  int samples = 100;
};

/// key = value lines with '#' comments. Unknown keys, unparsable values and
/// violated constraints throw ConfigError naming the key.
RunConfig parse_config(const std::string& text);
/// Apply one key = value pair without re-checking; call finalize once all
/// overrides are in.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);
/// Rebuilds the grid, then runs the constraint and required-key checks.
void finalize(RunConfig& cfg);
/// Reads a file and parses it; IoError if it cannot be read.
RunConfig load_config(const std::string& path);

/// Every accepted key, in the order they are documented.
const std::vector<std::string>& config_keys();

}  // namespace pksns
