#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "commands.hpp"

namespace {

using namespace wgscat;
using namespace wgscat::cli;

// Flags as given on the command line; unset ones leave the config untouched.
struct Flags {
  std::optional<std::string> config;
  std::optional<double> g2, delta, Delta, beta, phi, delay, T;
  std::optional<std::string> pulse;
  std::optional<std::size_t> grid_n;
  std::vector<std::string> sweeps;
  std::optional<std::string> out, format;
  bool non_markov = false;

  std::optional<std::string> mode;
  std::optional<double> omega_min, omega_max;
  std::optional<std::size_t> omega_n;
  std::optional<std::string> panel;
  std::optional<std::string> geometry, delta_rule;
  std::optional<std::size_t> dump_stride, max_evaluations;
  std::optional<std::string> objective;
  std::optional<double> oracle_dt;
  std::optional<std::string> inject_fault;
  std::optional<unsigned> seed;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file; flags override its values");
  app->add_option("--g2", f.g2, "coupling rate g^2");
  app->add_option("--delta", f.delta, "emitter detuning");
  app->add_option("--Delta", f.Delta, "exchange interaction");
  app->add_option("--beta", f.beta, "doubly-excited shift");
  app->add_option("--phi", f.phi, "separation phase [rad]");
  app->add_option("--delay", f.delay, "propagation delay between emitters");
  app->add_option("--pulse", f.pulse, "pulse shape")->check(CLI::IsMember({"square", "gaussian"}));
  app->add_option("--T", f.T, "pulse duration");
  app->add_option("--grid-n", f.grid_n, "time-grid samples");
  app->add_option("--sweep", f.sweeps, "sweep axis param:lo:hi:n (repeatable)");
  app->add_option("--out", f.out, "output path (default stdout)");
  app->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_flag("--non-markov", f.non_markov, "keep the propagation delay (single-photon quantities only)");
}

RunConfig resolve(const std::string& command, const Flags& f) {
  RunConfig cfg;
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in) throw std::invalid_argument("cannot read config file '" + *f.config + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config file '" + *f.config + "' is not valid JSON: " + e.what());
    }
    merge_json(cfg, j);
  }
  cfg.command = command;
  auto set = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  set(cfg.params.g2, f.g2);
  set(cfg.params.delta, f.delta);
  set(cfg.params.Delta, f.Delta);
  set(cfg.params.beta, f.beta);
  set(cfg.params.phi, f.phi);
  set(cfg.params.delay, f.delay);
  if (f.pulse) cfg.pulse = parse_pulse_shape(*f.pulse);
  set(cfg.T, f.T);
  set(cfg.grid_n, f.grid_n);
  if (!f.sweeps.empty()) {
    cfg.sweeps.clear();
    for (const auto& s : f.sweeps) cfg.sweeps.push_back(parse_sweep(s));
  }
  set(cfg.out, f.out);
  set(cfg.format, f.format);
  if (f.non_markov) cfg.markov = false;
  set(cfg.mode, f.mode);
  set(cfg.omega_min, f.omega_min);
  set(cfg.omega_max, f.omega_max);
  set(cfg.omega_n, f.omega_n);
  set(cfg.panel, f.panel);
  if (f.geometry) cfg.geometry = parse_geometry(*f.geometry);
  if (f.delta_rule) cfg.delta_rule = parse_delta_rule(*f.delta_rule);
  set(cfg.dump_stride, f.dump_stride);
  set(cfg.max_evaluations, f.max_evaluations);
  set(cfg.objective, f.objective);
  set(cfg.oracle_dt, f.oracle_dt);
  set(cfg.inject_fault, f.inject_fault);
  set(cfg.seed, f.seed);

  if (cfg.format != "csv" && cfg.format != "json") throw std::invalid_argument("format must be csv or json");
  if (!(cfg.T > 0.0)) throw std::invalid_argument("pulse duration must be positive");
  if (cfg.grid_n < 16) throw std::invalid_argument("grid needs at least 16 samples");
  if (!cfg.markov && (command == "two-photon" || command == "optimize"))
    throw std::invalid_argument("--non-markov applies to single-photon quantities only");
  cfg.params.validate();
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

void emit(const RunConfig& cfg, const CommandResult& r) {
  const nlohmann::json config = to_json(cfg);
  if (cfg.format == "json") {
    nlohmann::json j{{"config", config}, {"report", r.report}, {"table", to_json(r.table)}, {"warnings", r.warnings}};
    for (const auto& [name, table] : r.dumps) j["dumps"][name] = to_json(table);
    write_text(cfg.out, j.dump(2) + "\n");
    return;
  }
  write_text(cfg.out, to_csv(r.table, config));
  if (!r.dumps.empty()) {
    if (cfg.out.empty()) {
      std::cerr << "warning: wavefunction dumps need --out in csv format\n";
    } else {
      for (const auto& [name, table] : r.dumps) write_text(cfg.out + "." + name + ".csv", to_csv(table, config));
    }
  }
  if (!cfg.out.empty()) write_text(cfg.out + ".report.json", r.report.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-emitter waveguide scattering: spectra, maps, two-photon channels, optimization, validation"};
  app.require_subcommand(1);

  Flags f;
  auto* spectrum = app.add_subcommand("spectrum", "single-photon transmission and phases versus frequency");
  add_common(spectrum, f);
  spectrum->add_option("--mode", f.mode, "transmit, or one standing-wave mode")->check(CLI::IsMember({"transmit", "c", "d"}));
  spectrum->add_option("--omega-min", f.omega_min, "lowest frequency [g2]");
  spectrum->add_option("--omega-max", f.omega_max, "highest frequency [g2]");
  spectrum->add_option("--omega-n", f.omega_n, "frequency samples");

  auto* map = app.add_subcommand("map", "pulse transmission over (phi, g2T)");
  add_common(map, f);
  map->add_option("--panel", f.panel, "detuning preset")->check(CLI::IsMember({"a", "b", "c", "d", "custom"}));

  auto* two = app.add_subcommand("two-photon", "two-photon channel probabilities");
  add_common(two, f);
  two->add_option("--geometry", f.geometry, "input configuration")
      ->check(CLI::IsMember({"standing", "copropagating", "counterpropagating"}));
  two->add_option("--Delta-rule", f.delta_rule, "tie Delta to phi at every point")
      ->check(CLI::IsMember({"fixed", "abs-sin", "unit-transmission"}));
  two->add_option("--dump-stride", f.dump_stride, "write |f|^2 on every k-th node (0: off)");

  auto* opt = app.add_subcommand("optimize", "grid scan and simplex refinement");
  add_common(opt, f);
  opt->add_option("--objective", f.objective, "quantity to optimize")
      ->check(CLI::IsMember({"sorter", "linearity", "leakage"}));
  opt->add_option("--geometry", f.geometry, "input configuration for the linearity objective")
      ->check(CLI::IsMember({"standing", "copropagating", "counterpropagating"}));
  opt->add_option("--Delta-rule", f.delta_rule, "tie Delta to phi at every point")
      ->check(CLI::IsMember({"fixed", "abs-sin", "unit-transmission"}));
  opt->add_option("--max-evaluations", f.max_evaluations, "simplex evaluation budget");

  auto* val = app.add_subcommand("validate", "invariant suites and oracle comparison");
  add_common(val, f);
  val->add_option("--oracle-dt", f.oracle_dt, "oracle step [1/g2]");
  val->add_option("--inject-fault", f.inject_fault, "deliberate defect for mutation checks")
      ->check(CLI::IsMember({"reflect-sign"}));
  val->add_option("--seed", f.seed, "random seed for sampled suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  RunConfig cfg;
  try {
    cfg = resolve(command, f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    const CommandResult r = run_command(cfg);
    emit(cfg, r);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    return r.exit_code;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
