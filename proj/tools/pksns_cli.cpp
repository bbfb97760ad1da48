// pksns: simulate, sweep-mass, rate, check, resume.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "pksns/config.hpp"
#include "pksns/errors.hpp"
#include "pksns/scenarios.hpp"

namespace {

enum Exit { ok = 0, failed = 1, config_error = 2, numerical = 3, io_error = 4 };

// Remaining "--key value" or "--key=value" pairs become config overrides.
void apply_extras(pksns::RunConfig& cfg, const std::vector<std::string>& extras) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string a = extras[i];
    if (a.rfind("--", 0) != 0) throw pksns::ConfigError(a + ": expected --key value");
    a = a.substr(2);
    std::string value;
    if (const auto eq = a.find('='); eq != std::string::npos) {
      value = a.substr(eq + 1);
      a = a.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw pksns::ConfigError(a + ": missing value");
      value = extras[++i];
    }
    for (char& c : a) {
      if (c == '-') c = '_';
    }
    pksns::apply_override(cfg, a, value);
  }
}

pksns::RunConfig load(const std::string& path, const std::string& scenario,
                      const std::vector<std::string>& extras) {
  pksns::RunConfig cfg = path.empty() ? pksns::RunConfig{} : pksns::load_config(path);
  cfg.scenario = scenario;
  apply_extras(cfg, extras);
  pksns::finalize(cfg);
  return cfg;
}

int report_run(const pksns::SimulateOutput& o) {
  const auto& r = o.result;
  std::printf("status=%s t_event=%.10g last_resolved_t=%.10g steps=%ld\n",
              pksns::status_name(r.status), r.t_event, r.last_resolved_t, r.steps);
  if (!r.reason.empty()) std::printf("reason: %s\n", r.reason.c_str());
  std::printf("series: %s\n", o.series_path.c_str());
  for (const auto& c : o.checkpoints) std::printf("checkpoint: %s\n", c.c_str());
  return r.status == pksns::RunStatus::unresolved ? numerical : ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sheared Patlak-Keller-Segel-Navier-Stokes solver"};
  app.require_subcommand(1);
  std::string config_path, checkpoint, suite;

  auto verb = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--config", config_path, "key = value configuration file");
    s->allow_extras();
    return s;
  };
  CLI::App* simulate = verb("simulate", "integrate one configuration");
  CLI::App* sweep = verb("sweep-mass", "one run per mass, report statuses and the threshold bracket");
  CLI::App* rate = verb("rate", "fit the passive-scalar decay rate against A");
  CLI::App* check = verb("check", "run an inequality or identity suite");
  check->add_option("--suite", suite, "elliptic|poincare|loghls|gns|identities|all")->required();
  CLI::App* resume = verb("resume", "continue a run from a checkpoint");
  resume->add_option("--checkpoint", checkpoint, "checkpoint file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return report_run(pksns::scenario_simulate(load(config_path, "simulate", simulate->remaining())));
    }
    if (resume->parsed()) {
      // the density comes from the checkpoint, so no mass is required
      auto extras = resume->remaining();
      extras.insert(extras.end(), {"--init", "file", "--init_path", checkpoint});
      const auto cfg = load(config_path, "simulate", extras);
      return report_run(pksns::scenario_resume(cfg, checkpoint));
    }
    if (sweep->parsed()) {
      const auto rep = pksns::scenario_sweep_mass(load(config_path, "sweep_mass", sweep->remaining()));
      std::printf("%-14s %-11s %-14s %-10s\n", "mass", "status", "t_event", "peak");
      for (const auto& e : rep.entries) {
        std::printf("%-14.8g %-11s %-14.8g %-10.4g %s\n", e.mass, pksns::status_name(e.status),
                    e.t_event, e.peak_ratio, e.reason.c_str());
      }
      if (rep.bracketed) {
        std::printf("threshold bracket: (%.8g, %.8g)\n", rep.lo, rep.hi);
      } else {
        std::printf("threshold bracket: none\n");
      }
      return ok;
    }
    if (rate->parsed()) {
      const auto rep = pksns::scenario_rate_fit(load(config_path, "rate_fit", rate->remaining()));
      std::printf("%-12s %-14s %-14s\n", "A", "t_star", "rate");
      for (const auto& p : rep.points) std::printf("%-12.6g %-14.8g %-14.8g\n", p.A, p.t_star, p.rate);
      std::printf("slope=%.6f intercept=%.6f\n", rep.slope, rep.intercept);
      return ok;
    }
    if (check->parsed()) {
      auto extras = check->remaining();
      extras.push_back("--suite");
      extras.push_back(suite);
      bool pass = true;
      for (const auto& r : pksns::scenario_check(load(config_path, "check", extras))) {
        std::printf("%s\n", pksns::format_check(r).c_str());
        pass = pass && r.pass;
      }
      return pass ? ok : failed;
    }
  } catch (const pksns::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return config_error;
  } catch (const pksns::NumericalAbort& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return numerical;
  } catch (const pksns::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return io_error;
  } catch (const pksns::DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return config_error;
  } catch (const pksns::ContractViolation& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return config_error;
  }
  return ok;
}
