#include "pksns/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "pksns/errors.hpp"

namespace pksns {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

// Plain number, optionally followed by "pi" or "pi^2" (e.g. 8pi, 0.8*16pi^2).
double real(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  double scale = 1.0;
  auto strip = [&](const std::string& suffix, double factor) {
    if (t.size() >= suffix.size() && t.compare(t.size() - suffix.size(), suffix.size(), suffix) == 0) {
      t = trim(t.substr(0, t.size() - suffix.size()));
      scale *= factor;
      return true;
    }
    return false;
  };
  constexpr double pi = std::numbers::pi;
  if (!strip("pi^2", pi * pi)) strip("pi", pi);
  if (scale != 1.0) {
    if (!t.empty() && t.back() == '*') t = trim(t.substr(0, t.size() - 1));
    std::stringstream ss(t);
    std::string part;
    double v = 1.0;
    while (std::getline(ss, part, '*')) {
      if (trim(part).empty()) continue;
      v *= real(key, part);
    }
    return v * scale;
  }
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    bad(key, "cannot parse '" + text + "' as a number");
  }
  return v;
}

long integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    bad(key, "cannot parse '" + text + "' as an integer");
  }
  return v;
}

bool boolean(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  bad(key, "cannot parse '" + text + "' as a boolean");
}

std::vector<std::string> items(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

std::vector<double> reals(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& s : items(text)) out.push_back(real(key, s));
  return out;
}

template <std::size_t N, typename T, typename F>
std::array<T, N> tuple(const std::string& key, const std::string& text, F&& conv) {
  const auto parts = items(text);
  if (parts.size() != N) bad(key, "expects " + std::to_string(N) + " comma-separated values");
  std::array<T, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = static_cast<T>(conv(key, parts[i]));
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& v)>;

const std::vector<std::pair<std::string, Setter>>& table() {
  static const std::vector<std::pair<std::string, Setter>> t = {
      // grid and physics
      {"dim", [](RunConfig& c, auto& k, auto& v) { c.dim = static_cast<int>(integer(k, v)); }},
      {"nx", [](RunConfig& c, auto& k, auto& v) { c.modes[0] = static_cast<int>(integer(k, v)); }},
      {"ny", [](RunConfig& c, auto& k, auto& v) { c.modes[1] = static_cast<int>(integer(k, v)); }},
      {"nz", [](RunConfig& c, auto& k, auto& v) { c.modes[2] = static_cast<int>(integer(k, v)); }},
      {"A", [](RunConfig& c, auto& k, auto& v) { c.params.A = real(k, v); }},
      {"shear", [](RunConfig& c, auto& k, auto& v) { c.params.shear = boolean(k, v); }},
      {"chemotaxis", [](RunConfig& c, auto& k, auto& v) { c.params.chemotaxis = boolean(k, v); }},
      {"fluid", [](RunConfig& c, auto& k, auto& v) { c.params.fluid = boolean(k, v); }},
      {"phi_axis",
       [](RunConfig& c, auto& k, auto& v) { c.params.phi_axis = static_cast<int>(integer(k, v)); }},
      {"dt_max", [](RunConfig& c, auto& k, auto& v) { c.params.dt_max = real(k, v); }},
      {"cfl", [](RunConfig& c, auto& k, auto& v) { c.params.cfl = real(k, v); }},
      {"t_end", [](RunConfig& c, auto& k, auto& v) { c.params.t_end = real(k, v); }},
      {"dealias", [](RunConfig& c, auto& k, auto& v) { c.params.dealias = boolean(k, v); }},
      {"fixed_dt", [](RunConfig& c, auto& k, auto& v) { c.params.fixed_dt = boolean(k, v); }},
      {"a_weight", [](RunConfig& c, auto& k, auto& v) { c.params.a_weight = real(k, v); }},
      {"b_weight", [](RunConfig& c, auto& k, auto& v) { c.params.b_weight = real(k, v); }},
      {"linf_factor", [](RunConfig& c, auto& k, auto& v) { c.params.linf_factor = real(k, v); }},
      {"tail_ratio_max",
       [](RunConfig& c, auto& k, auto& v) { c.params.tail_ratio_max = real(k, v); }},
      {"drop_bound", [](RunConfig& c, auto& k, auto& v) { c.params.drop_bound = real(k, v); }},
      {"positivity_tol",
       [](RunConfig& c, auto& k, auto& v) { c.params.positivity_tol = real(k, v); }},
      {"dt_min", [](RunConfig& c, auto& k, auto& v) { c.params.dt_min = real(k, v); }},
      // scenario
      {"scenario", [](RunConfig& c, auto&, auto& v) { c.scenario = trim(v); }},
      {"output_every", [](RunConfig& c, auto& k, auto& v) { c.output_every = real(k, v); }},
      {"checkpoint_every",
       [](RunConfig& c, auto& k, auto& v) { c.checkpoint_every = real(k, v); }},
      {"max_steps", [](RunConfig& c, auto& k, auto& v) { c.max_steps = integer(k, v); }},
      {"ledger", [](RunConfig& c, auto& k, auto& v) { c.ledger = boolean(k, v); }},
      {"decomposition", [](RunConfig& c, auto& k, auto& v) { c.decomposition = boolean(k, v); }},
      {"output_dir", [](RunConfig& c, auto&, auto& v) { c.output_dir = trim(v); }},
      {"masses", [](RunConfig& c, auto& k, auto& v) { c.masses = reals(k, v); }},
      {"amplitudes", [](RunConfig& c, auto& k, auto& v) { c.amplitudes = reals(k, v); }},
      {"workers",
       [](RunConfig& c, auto& k, auto& v) { c.workers = static_cast<int>(integer(k, v)); }},
      {"suite", [](RunConfig& c, auto&, auto& v) { c.suite = trim(v); }},
      {"samples",
       [](RunConfig& c, auto& k, auto& v) { c.samples = static_cast<int>(integer(k, v)); }},
      // density
      {"init", [](RunConfig& c, auto&, auto& v) { c.init.kind = trim(v); }},
      {"mass", [](RunConfig& c, auto& k, auto& v) { c.init.mass = real(k, v); }},
      {"width", [](RunConfig& c, auto& k, auto& v) { c.init.width = real(k, v); }},
      {"center", [](RunConfig& c, auto& k, auto& v) { c.init.center = tuple<3, double>(k, v, real); }},
      {"background", [](RunConfig& c, auto& k, auto& v) { c.init.background = real(k, v); }},
      {"amplitude", [](RunConfig& c, auto& k, auto& v) { c.init.amplitude = real(k, v); }},
      {"mode", [](RunConfig& c, auto& k, auto& v) { c.init.k = tuple<3, int>(k, v, integer); }},
      {"seed", [](RunConfig& c, auto& k, auto& v) {
         c.init.seed = static_cast<std::uint64_t>(integer(k, v));
       }},
      {"spectrum_slope",
       [](RunConfig& c, auto& k, auto& v) { c.init.spectrum_slope = real(k, v); }},
      {"band", [](RunConfig& c, auto& k, auto& v) { c.init.band = static_cast<int>(integer(k, v)); }},
      {"init_path", [](RunConfig& c, auto&, auto& v) { c.init.path = trim(v); }},
      // velocity
      {"u_init", [](RunConfig& c, auto&, auto& v) { c.u_init.kind = trim(v); }},
      {"u_eps", [](RunConfig& c, auto& k, auto& v) { c.u_init.eps = real(k, v); }},
      {"u1_amplitude", [](RunConfig& c, auto& k, auto& v) { c.u_init.u1_amplitude = real(k, v); }},
      {"u_nonzero_amplitude",
       [](RunConfig& c, auto& k, auto& v) { c.u_init.nonzero_amplitude = real(k, v); }},
      {"u_mean_u2", [](RunConfig& c, auto& k, auto& v) { c.u_init.mean_u2 = real(k, v); }},
      {"u_seed", [](RunConfig& c, auto& k, auto& v) {
         c.u_init.seed = static_cast<std::uint64_t>(integer(k, v));
       }},
      {"u_spectrum_slope",
       [](RunConfig& c, auto& k, auto& v) { c.u_init.spectrum_slope = real(k, v); }},
      {"u_band",
       [](RunConfig& c, auto& k, auto& v) { c.u_init.band = static_cast<int>(integer(k, v)); }},
  };
  return t;
}

const Setter* find(const std::string& key) {
  for (const auto& [k, s] : table()) {
    if (k == key) return &s;
  }
  return nullptr;
}

void set(RunConfig& cfg, const std::string& key, const std::string& value) {
  const Setter* s = find(key);
  if (s == nullptr) throw ConfigError(key + ": unknown key");
  (*s)(cfg, key, value);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, s] : table()) out.push_back(k);
    return out;
  }();
  return keys;
}

void finalize(RunConfig& c) {
  if (c.dim != 2 && c.dim != 3) bad("dim", "must be 2 or 3");
  static const char* axis[] = {"nx", "ny", "nz"};
  for (int a = 0; a < c.dim; ++a) {
    if (c.modes[a] % 2 != 0) bad(axis[a], "n_modes must be even");
    if (c.modes[a] < 8) bad(axis[a], "n_modes must be >= 8");
  }
  c.params.grid = GridSpec::make(c.dim, c.modes);
  c.params.validate();
  if (!(c.params.dt_min > 0.0) || c.params.dt_min > c.params.dt_max) {
    bad("dt_min", "must lie in (0, dt_max]");
  }
  if (!(c.output_every > 0.0)) bad("output_every", "must be > 0");
  if (c.checkpoint_every < 0.0) bad("checkpoint_every", "must be >= 0");
  if (c.max_steps < 0) bad("max_steps", "must be >= 0");
  if (c.workers < 0) bad("workers", "must be >= 0");

  const DensityInit& d = c.init;
  static const char* kinds[] = {"gaussian", "random", "mode", "file"};
  if (std::find(std::begin(kinds), std::end(kinds), d.kind) == std::end(kinds)) {
    bad("init", "must be one of gaussian, random, mode, file");
  }
  if (d.kind == "file" && d.path.empty()) bad("init_path", "required when init = file");
  if (!(d.width > 0.0)) bad("width", "must be > 0");
  if (!(d.background >= 0.0 && d.background < 1.0)) bad("background", "must lie in [0, 1)");
  if ((d.kind == "random" || d.kind == "mode") && !(d.amplitude >= 0.0 && d.amplitude < 1.0)) {
    bad("amplitude", "must lie in [0, 1) so that the density stays positive");
  }
  if (d.band < 1) bad("band", "must be >= 1");
  for (int a = 0; a < c.dim; ++a) {
    if (d.band >= c.modes[a] / 2) bad("band", "does not fit the grid");
  }
  if (d.mass < 0.0) bad("mass", "must be > 0");

  const VelocityInit& u = c.u_init;
  if (u.kind != "zero" && u.kind != "random") bad("u_init", "must be zero or random");
  if (u.eps < 0.0) bad("u_eps", "must be >= 0");
  if (u.u1_amplitude < 0.0) bad("u1_amplitude", "must be >= 0");
  if (u.nonzero_amplitude < 0.0) bad("u_nonzero_amplitude", "must be >= 0");
  if (u.kind == "random" && !c.params.has_fluid()) {
    bad("u_init", "a velocity needs dim = 3 and fluid = true");
  }
  if (u.band < 1) bad("u_band", "must be >= 1");
  if (u.kind == "random") {
    for (int a = 0; a < c.dim; ++a) {
      if (u.band >= c.modes[a] / 2) bad("u_band", "does not fit the grid");
    }
  }

  if (c.scenario == "simulate") {
    if (d.kind != "file" && !(d.mass > 0.0)) bad("mass", "required (> 0) for scenario simulate");
  } else if (c.scenario == "sweep_mass") {
    if (c.masses.empty()) bad("masses", "required (non-empty list) for scenario sweep_mass");
    for (double m : c.masses) {
      if (!(m > 0.0)) bad("masses", "every mass must be > 0");
    }
    if (d.kind == "file") bad("init", "sweep_mass needs a generated initial shape");
  } else if (c.scenario == "rate_fit") {
    if (c.amplitudes.size() < 2) bad("amplitudes", "rate_fit needs at least two values of A");
    for (double a : c.amplitudes) {
      if (!(a >= 1.0)) bad("amplitudes", "every A must be >= 1");
    }
    if (d.kind != "file" && !(d.mass > 0.0)) bad("mass", "required (> 0) for scenario rate_fit");
  } else if (c.scenario == "check") {
    static const char* suites[] = {"elliptic", "poincare", "loghls", "gns", "identities", "all"};
    if (std::find(std::begin(suites), std::end(suites), c.suite) == std::end(suites)) {
      bad("suite", "must be one of elliptic, poincare, loghls, gns, identities, all");
    }
    if (c.samples < 1) bad("samples", "must be >= 1");
  } else {
    bad("scenario", "must be one of simulate, sweep_mass, rate_fit, check");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (auto it = seen.find(key); it != seen.end()) {
      bad(key, "given twice (lines " + std::to_string(it->second) + " and " +
                   std::to_string(lineno) + ")");
    }
    seen[key] = lineno;
    set(cfg, key, line.substr(eq + 1));
  }
  finalize(cfg);
  return cfg;
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  set(cfg, key, value);
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError(path + ": cannot open config");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace pksns
