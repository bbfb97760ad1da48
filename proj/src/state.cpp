#include "pksns/state.hpp"

#include "pksns/errors.hpp"

namespace pksns {

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::running: return "running";
    case RunStatus::suppressed: return "suppressed";
    case RunStatus::blowup: return "blowup";
    case RunStatus::unresolved: return "unresolved";
  }
  return "?";
}

void Params::validate() const {
  if (!(A >= 1.0)) throw ConfigError("A: shear amplitude must be >= 1");
  if (phi_axis != 0) throw ConfigError("phi_axis: only the x forcing direction (0) is supported");
  if (!(dt_max > 0.0)) throw ConfigError("dt_max: must be > 0");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl: must lie in (0, 1]");
  if (!(t_end > 0.0)) throw ConfigError("t_end: must be > 0");
  if (!(a_weight > 0.0)) throw ConfigError("a_weight: must be > 0");
  if (!(b_weight > a_weight)) throw ConfigError("b_weight: requires a < b");
  if (!(b_weight < 2.0 * a_weight)) throw ConfigError("b_weight: requires b < 2a");
  if (!(linf_factor > 1.0)) throw ConfigError("linf_factor: must be > 1");
  if (!(tail_ratio_max > 0.0)) throw ConfigError("tail_ratio_max: must be > 0");
  if (!(drop_bound >= 0.0)) throw ConfigError("drop_bound: must be >= 0");
  if (!(positivity_tol >= 0.0)) throw ConfigError("positivity_tol: must be >= 0");
}

double State::mass() const { return n.coeffs()(0, 0).real() * n.grid().volume(); }

State make_state(const Params& p, const SpectralField& n) {
  return make_state(p, n, SpectralField(p.grid, p.has_fluid() ? 3 : 0));
}

State make_state(const Params& p, const SpectralField& n, const SpectralField& u) {
  if (!(n.grid() == p.grid) || n.components() != 1) {
    throw ContractViolation("initial density does not match the grid");
  }
  const int want = p.has_fluid() ? 3 : 0;
  State s;
  s.n = n;
  if (u.components() == want && u.grid() == p.grid) {
    s.u = u;
  } else if (u.components() == 0) {
    s.u = SpectralField(p.grid, want);
  } else {
    throw ContractViolation("initial velocity does not match the grid");
  }
  return s;
}

}  // namespace pksns
