#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pksns/config.hpp"
#include "pksns/inequality.hpp"
#include "pksns/solver.hpp"

namespace pksns {

/// Initial density of the configured kind with the given total mass.
SpectralField build_density(const RunConfig& cfg, double mass);
/// Initial velocity (empty field without a fluid).
SpectralField build_velocity(const RunConfig& cfg);
State initial_state(const RunConfig& cfg);
RunOptions run_options(const RunConfig& cfg);

struct SimulateOutput {
  RunResult result;
  std::string series_path;
  std::vector<std::string> checkpoints;
};
/// Runs `init` and writes series.csv and ckpt_<k>.pksn into cfg.output_dir.
SimulateOutput scenario_simulate(const RunConfig& cfg, const State& init);
SimulateOutput scenario_simulate(const RunConfig& cfg);
/// Continues from a checkpoint; grid and A come from the file, the rest
/// from `cfg`.
SimulateOutput scenario_resume(const RunConfig& cfg, const std::string& checkpoint);

struct SweepEntry {
  double mass = 0.0;
  RunStatus status = RunStatus::running;
  std::string reason;
  double t_event = 0.0;
  double last_resolved_t = 0.0;
  double peak_ratio = 0.0;  // max ||n||_inf over samples / initial
};
struct SweepReport {
  std::vector<SweepEntry> entries;  // in the configured order
  bool bracketed = false;           // every suppressed mass below every blowup mass
  double lo = 0.0, hi = 0.0;        // largest suppressed, smallest blowup
};
/// One run per mass, same initial shape, fanned out over worker threads.
/// Each run writes into cfg.output_dir/mass_<i>/; sweep.csv is the table.
SweepReport scenario_sweep_mass(const RunConfig& cfg);

struct RatePoint {
  double A = 0.0;
  double t_star = 0.0;  // ||n_neq|| reaches e^{-1/2} of its initial value
  double rate = 0.0;    // 1 / (2 t_star)
};
struct RateReport {
  std::vector<RatePoint> points;
  double slope = 0.0, intercept = 0.0;  // log rate = intercept + slope log A
};
/// Time for ||n_neq|| to fall to `level` of its start value under the
/// passive-scalar dynamics (no chemotaxis, no fluid), interpolated in log
/// norm between steps.
double decay_time(const Params& p, const SpectralField& n0, double level);
RateReport scenario_rate_fit(const RunConfig& cfg);

/// One report per check in the suite (or every suite for "all").
std::vector<CheckReport> scenario_check(const RunConfig& cfg);
std::string format_check(const CheckReport& r);

}  // namespace pksns
