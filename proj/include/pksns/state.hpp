#pragma once

#include <string>

#include "pksns/field.hpp"
#include "pksns/shear.hpp"

namespace pksns {

enum class RunStatus { running, suppressed, blowup, unresolved };

const char* status_name(RunStatus s);

/// Physical and numerical parameters of one run.
struct Params {
  GridSpec grid = GridSpec::make(2, {64, 64, 1});
  double A = 1.0;
  bool shear = true;       // Couette transport y d/dx
  bool chemotaxis = true;  // -(1/A) div(n grad c)
  bool fluid = true;       // velocity perturbation (3D only)
  int phi_axis = 0;        // the density forcing enters u along this axis
  double dt_max = 0.05;
  double cfl = 0.5;
  double t_end = 1.0;
  bool dealias = true;
  bool fixed_dt = false;  // always use dt_max (capped by output times and drift)
  double a_weight = 0.05;
  double b_weight = 0.08;
  // monitors
  double linf_factor = 100.0;
  double tail_ratio_max = 1e-4;
  double drop_bound = 1e-6;
  double positivity_tol = 1e-8;
  double dt_min = 1e-12;

  int dim() const { return grid.dim; }
  bool has_fluid() const { return fluid && grid.dim == 3; }
  double shear_rate() const { return shear ? 1.0 : 0.0; }
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// n and u live in the sheared frame described by `frame`.
struct State {
  double t = 0.0;
  SpectralField n;
  SpectralField u;  // 3 components with fluid, 0 otherwise
  ShearFrame frame;
  double dropped_energy = 0.0;  // cumulative fraction lost to remaps

  double mass() const;
};

/// Fresh state with u = 0 of the right shape.
State make_state(const Params& p, const SpectralField& n);
State make_state(const Params& p, const SpectralField& n, const SpectralField& u);

}  // namespace pksns
