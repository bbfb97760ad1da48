#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pksns/diagnostics.hpp"
#include "pksns/state.hpp"

namespace pksns {

/// -(1/A) [u.grad n + div(n grad c)] in divergence form. `u` may have zero
/// components (no flow).
SpectralField rhs_density(const SpectralField& n, const SpectralField& u, const SpectralField& c,
                          double A, double drift = 0.0, bool dealias = true);

/// Projected non-stiff velocity tendency P[(n e1 - u.grad u)/A - u2 e1]
/// in the drifting frame; divergence-free. With shear the integrator adds
/// the pressure share k1 u2 k / |k|^2 that keeps k_eff . u = 0 as k_eff
/// drifts.
SpectralField rhs_velocity(const SpectralField& n, const SpectralField& u, double A,
                           double drift = 0.0, bool dealias = true);

struct StepInfo {
  double dt = 0.0;
  double dropped = 0.0;  // fraction of non-mean energy removed by a remap
  bool remapped = false;
};

/// Lawson-Heun stepping: the shear/diffusion propagator is applied exactly
/// and the remaining terms by Heun's method in the propagated variables.
class Integrator {
 public:
  explicit Integrator(const Params& p);

  /// Advances `s` (and `d`, if given) by one step ending no later than
  /// t_stop. Throws NumericalAbort on non-finite data or dt underflow.
  StepInfo step(State& s, DecompositionState* d, double t_stop);
  const Params& params() const { return p_; }

 private:
  struct Eval {
    SpectralField dn, du;
    DecompositionRhs dd;
    double speed = 0.0;  // max of |u| and |grad c| on the grid
  };
  Eval evaluate(const SpectralField& n, const SpectralField& u, double drift,
                const DecompositionState* d) const;

  Params p_;
};

/// One step with a throwaway integrator.
State step(const State& s, const Params& p);

struct SeriesRow {
  double t = 0, mass = 0, n_min = 0, n_linf = 0, n_l2 = 0, u_l2 = 0, div_l2 = 0;
  EnergyReport E;
  double free_energy = 0, dropped_energy = 0, dt = 0;
  RunStatus status = RunStatus::running;
  // not part of the CSV
  double tail_ratio = 0;
  double decomposition_error = 0;  // ||G1+B1+B2 - u1,0|| / ||u1,0||
  double bar_B1 = 0, bar_B2 = 0, bar_u2 = 0;
  double min_dyV = 1;
};

struct RunOptions {
  double output_every = 0.1;
  bool ledger = true;
  bool decomposition = true;  // only used with a fluid
  bool free_energy = true;
  double checkpoint_every = 0.0;
  std::function<void(const State&)> on_checkpoint;
  long max_steps = 0;  // 0 = unlimited
};

struct RunResult {
  RunStatus status = RunStatus::running;
  std::string reason;
  double t_event = 0.0;          // time the monitor fired (or t_end)
  double last_resolved_t = 0.0;  // last time every resolution check passed
  std::vector<SeriesRow> series;
  State final_state;
  std::optional<DecompositionState> decomposition;
  long steps = 0;
};

RunResult run(const Params& p, const State& init, const RunOptions& opt = {});

/// min n(t) >= delta e^{-nbar t / A} - slack at every sample.
bool min_principle_check(const std::vector<SeriesRow>& series, double delta, double nbar,
                         double A, double slack);

/// Energy fraction in the top third of the dealiased band. With shear, a
/// k1 != 0 mode is placed by its k1 and k3 only (the sheared k2 is tracked
/// by the remap loss instead).
double tail_ratio(const SpectralField& F, bool shear);

}  // namespace pksns
