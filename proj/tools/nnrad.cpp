// nnrad: command-line front end for the Newmark/Newton-Raphson solver.
//
//   nnrad solve|sweep|spectrum|check-jacobian --config <path> [--out <path>]
//         [--strategy full|simplified|broyden] [--dt <s>] [--seed <u64>]
//
// Exit codes: 0 success, 1 solver/check failure, 2 configuration error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "nnrad/io/config.hpp"
#include "nnrad/io/csv.hpp"
#include "nnrad/nnrad.hpp"

namespace {

using namespace nnrad;

struct Options {
  std::string config;
  std::string out = "-";
  std::optional<std::string> strategy;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  // spectrum only
  std::optional<std::string> input;
  std::optional<std::string> column;
};

io::RunConfig load(const Options& o) {
  io::RunConfig c = o.config.empty() ? io::parse_run_config(io::json{{"schema_version", 1}})
                                     : io::load_run_config(o.config);
  if (o.strategy) {
    const auto s = parse_strategy(*o.strategy);
    if (!s) throw ConfigError("--strategy must be full, simplified or broyden");
    c.newmark.strategy = *s;
  }
  if (o.dt) {
    if (!(*o.dt > 0.0)) throw ConfigError("--dt must be positive");
    c.newmark.dt = *o.dt;
  }
  if (o.seed) c.check.seed = *o.seed;
  return c;
}

const io::SystemSpec& require_system(const io::RunConfig& c) {
  if (!c.system) throw ConfigError("config: 'system' section is required for this command");
  return *c.system;
}

/// Writes through `body` to the --out path, or stdout for "-".
void emit(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  body(out);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

int cmd_solve(const Options& o) {
  const io::RunConfig c = load(o);
  const DynamicSystem sys = require_system(c).build();
  for (const auto& w : c.newmark.warnings()) std::cerr << "warning: " << w << '\n';
  const auto [x0, v0] = c.initial_conditions(sys.n_dof());
  const Trajectory traj = run_integrator(sys, x0, v0, c.t0, c.t_end, c.newmark, c.integrator);
  emit(o.out, [&](std::ostream& os) { io::write_trajectory(os, traj); });
  return 0;
}

int cmd_sweep(const Options& o) {
  const io::RunConfig c = load(o);
  const io::SystemSpec& spec = require_system(c);
  if (!c.sweep) throw ConfigError("config: 'sweep' section is required for the sweep command");
  if (!spec.has_speed()) throw ConfigError("sweep: system type has no rotational speed");
  const io::SweepSpec& sw = *c.sweep;
  if (sw.probes.empty()) throw ConfigError("sweep: no probes given");

  SweepOptions opt;
  opt.newmark = c.newmark;
  opt.integrator = c.integrator;
  opt.t0 = c.t0;
  opt.t_end = c.t_end;
  opt.steady_fraction = sw.steady_fraction;
  opt.probes = sw.probes;
  opt.continuation = sw.continuation;
  const double t0 = c.t0;
  const io::RunConfig* cfg = &c;
  opt.initial_state = [cfg, t0, mode = sw.initial](const DynamicSystem& sys) {
    auto ic = cfg->initial_conditions(sys.n_dof());
    if (mode == io::InitialMode::StaticEquilibrium) ic.first = static_equilibrium(sys, t0, ic.first);
    return ic;
  };
  const auto rows = sweep([&](double w) { return spec.build_at_speed(w); }, sw.speeds, opt);
  emit(o.out, [&](std::ostream& os) { io::write_sweep(os, rows, sw.probes); });
  int failures = 0;
  for (const auto& r : rows)
    if (!r.ok()) {
      ++failures;
      std::cerr << "speed " << r.speed << ": " << r.error << '\n';
    }
  return failures == 0 ? 0 : 1;
}

int cmd_spectrum(const Options& o) {
  const io::RunConfig c = load(o);
  io::SpectrumSpec sp = c.spectrum.value_or(io::SpectrumSpec{});
  if (o.input) sp.input = *o.input;
  if (o.column) sp.column = *o.column;
  if (o.dt) sp.dt = *o.dt;
  if (sp.input.empty()) throw ConfigError("spectrum: no input CSV (use --input or spectrum.input)");

  const io::Table table = io::read_table(sp.input);
  const auto& col = table.column(sp.column);
  double dt = 0.0;
  if (sp.dt) {
    dt = *sp.dt;
  } else {
    const auto& t = table.column("t");
    if (t.size() < 2) throw ConfigError("spectrum: need at least two rows to infer dt");
    dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  }
  if (col.size() < 2) throw ConfigError("spectrum: column '" + sp.column + "' has fewer than two samples");
  std::size_t first = 0;
  if (sp.window_fraction < 1.0)
    first = col.size() - std::max<std::size_t>(
                             2, static_cast<std::size_t>(std::llround(sp.window_fraction * col.size())));
  const Spectrum s = spectrum(std::span<const double>(col).subspan(first), dt);
  emit(o.out, [&](std::ostream& os) { io::write_spectrum(os, s); });
  return 0;
}

int cmd_check_jacobian(const Options& o) {
  const io::RunConfig c = load(o);
  const DynamicSystem sys = require_system(c).build();
  const JacobianCheckReport rep = check_residual_jacobian(sys, c.newmark, c.check.states, c.check.seed);
  const bool ok = rep.passed(c.check.tolerance);
  emit(o.out, [&](std::ostream& os) {
    os << "system: " << rep.system << '\n'
       << "states: " << rep.states << " (rejected near non-smooth points: " << rep.rejected << ")\n"
       << "seed: " << c.check.seed << '\n'
       << "max relative error: " << io::format_double(rep.max_error) << '\n'
       << "mean relative error: " << io::format_double(rep.mean_error) << '\n'
       << "tolerance: " << io::format_double(c.check.tolerance) << '\n';
    if (rep.analytic_error)
      os << "analytic (linear system) relative error: " << io::format_double(*rep.analytic_error) << '\n';
    os
       << (ok ? "PASS" : "FAIL") << '\n';
  });
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Newmark/Newton-Raphson solver with automatic-differentiation Jacobians"};
  app.require_subcommand(1, 1);
  Options o;

  auto common = [&](CLI::App* sub, bool config_required) {
    auto* cfg = sub->add_option("--config", o.config, "JSON run configuration");
    if (config_required) cfg->required()->check(CLI::ExistingFile);
    else cfg->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output path ('-' for stdout)");
    sub->add_option("--strategy", o.strategy, "Newton strategy")
        ->check(CLI::IsMember({"full", "simplified", "broyden"}));
    sub->add_option("--dt", o.dt, "time step [s]");
    sub->add_option("--seed", o.seed, "RNG seed for randomized checks");
  };
  auto* solve = app.add_subcommand("solve", "integrate one configuration, write trajectory CSV");
  common(solve, true);
  auto* sweep_cmd = app.add_subcommand("sweep", "amplitude-frequency sweep, write speed/amplitude CSV");
  common(sweep_cmd, true);
  auto* spec = app.add_subcommand("spectrum", "one-sided spectrum of a trajectory column");
  common(spec, false);
  spec->add_option("--input", o.input, "trajectory CSV")->check(CLI::ExistingFile);
  spec->add_option("--column", o.column, "column name (default x_0)");
  auto* check = app.add_subcommand("check-jacobian", "AD vs finite-difference residual Jacobian");
  common(check, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(o);
    if (*sweep_cmd) return cmd_sweep(o);
    if (*spec) return cmd_spectrum(o);
    if (*check) return cmd_check_jacobian(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
