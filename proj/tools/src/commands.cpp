#include "commands.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "parallel.hpp"
#include "wgscat/linear.hpp"

namespace wgscat::cli {

namespace {

void add_unique(std::vector<std::string>& dst, const std::vector<std::string>& src) {
  for (const auto& s : src)
    if (std::find(dst.begin(), dst.end(), s) == dst.end()) dst.push_back(s);
}

std::vector<std::vector<double>> points_or_single(const RunConfig& cfg) { return sweep_points(cfg.sweeps); }

nlohmann::json dimensionless(const RunConfig& cfg) {
  const auto& p = cfg.params;
  return {{"g2T", p.g2 * cfg.T},
          {"deltaT", p.delta * cfg.T},
          {"DeltaT", p.Delta * cfg.T},
          {"betaT", p.beta * cfg.T},
          {"phi", p.phi}};
}

}  // namespace

std::vector<std::string> sweep_columns(const RunConfig& cfg) {
  std::vector<std::string> cols;
  for (const auto& a : cfg.sweeps) {
    if (a.param == "phi") cols.push_back("phi [rad]");
    else if (a.param == "T") cols.push_back("T [1/g2]");
    else if (a.param.ends_with("T") || a.param.ends_with("/g2")) cols.push_back(a.param);
    else if (a.param == "delay") cols.push_back("delay [1/g2]");
    else cols.push_back(a.param + " [g2]");
  }
  return cols;
}

CommandResult cmd_spectrum(const RunConfig& cfg) {
  if (cfg.mode != "transmit" && cfg.mode != "c" && cfg.mode != "d")
    throw std::invalid_argument("spectrum mode must be transmit, c or d");
  if (cfg.omega_n == 0 || (cfg.omega_n > 1 && !(cfg.omega_max > cfg.omega_min)))
    throw std::invalid_argument("spectrum needs omega_min < omega_max and omega_n >= 1");
  const bool traveling = cfg.mode == "transmit";
  const bool scaled = cfg.params.g2 > 0.0;

  CommandResult r;
  r.table.columns = sweep_columns(cfg);
  r.table.columns.push_back(scaled ? "omega/g2" : "omega");
  if (traveling) {
    for (const char* c : {"T", "arg_t [rad]", "arg_r [rad]"}) r.table.columns.push_back(c);
  } else {
    for (const char* c : {"abs2_ratio", "arg_ratio [rad]"}) r.table.columns.push_back(c);
  }

  const auto points = points_or_single(cfg);
  const auto blocks = parallel_map(points.size(), [&](std::size_t k) {
    const RunConfig c = at_point(cfg, points[k]);
    c.params.validate();
    const double unit = scaled ? c.params.g2 : 1.0;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < c.omega_n; ++i) {
      const double w_rel = c.omega_n == 1 ? c.omega_min
                                          : c.omega_min + (c.omega_max - c.omega_min) * static_cast<double>(i) /
                                                              static_cast<double>(c.omega_n - 1);
      const double w = w_rel * unit;
      std::vector<double> row = points[k];
      row.push_back(w_rel);
      if (traveling) {
        const auto tr = traveling_transfer(c.params, c.markov);
        const cplx t = tr.transmit(w), rr = tr.reflect(w);
        row.push_back(std::norm(t));
        row.push_back(std::arg(t));
        row.push_back(std::norm(rr) > 0.0 ? std::arg(rr) : std::nan(""));
      } else {
        const auto tf = standing_wave_transfer(c.params, c.mode == "c" ? TransferMode::c : TransferMode::d, c.markov);
        const cplx v = tf(w);
        row.push_back(std::norm(v));
        row.push_back(std::arg(v));
      }
      rows.push_back(std::move(row));
    }
    return rows;
  });
  for (const auto& b : blocks) r.table.rows.insert(r.table.rows.end(), b.begin(), b.end());
  r.report = {{"rows", r.table.rows.size()}, {"mode", cfg.mode}, {"markov", cfg.markov}};
  return r;
}

RunConfig map_config(RunConfig cfg) {
  const double T = cfg.T;
  if (cfg.panel == "a") {
    cfg.params.delta = 0.0;
    cfg.params.Delta = 0.0;
  } else if (cfg.panel == "b") {
    cfg.params.delta = 10.0 / T;
    cfg.params.Delta = 0.0;
  } else if (cfg.panel == "c") {
    cfg.params.delta = 0.0;
    cfg.params.Delta = 10.0 / T;
  } else if (cfg.panel == "d") {
    cfg.params.delta = 10.0 / T;
    cfg.params.Delta = 10.0 / T;
  } else if (cfg.panel != "custom") {
    throw std::invalid_argument("map panel must be a, b, c, d or custom");
  }
  if (cfg.sweeps.empty()) {
    cfg.sweeps.push_back(parse_sweep("phi:-pi:pi:100"));
    cfg.sweeps.push_back(parse_sweep("g2T:0.2:20:100"));
  }
  return cfg;
}

CommandResult cmd_map(const RunConfig& input) {
  const RunConfig cfg = map_config(input);
  if (cfg.pulse != PulseShape::square && cfg.pulse != PulseShape::gaussian)
    throw std::invalid_argument("map needs a square or gaussian pulse");
  CommandResult r;
  r.table.columns = sweep_columns(cfg);
  r.table.columns.push_back("transmission");
  r.table.columns.push_back("T_omega0");

  const auto points = points_or_single(cfg);
  struct Cell {
    std::vector<double> row;
    std::vector<std::string> warnings;
  };
  const auto cells = parallel_map(points.size(), [&](std::size_t k) {
    const RunConfig c = at_point(cfg, points[k]);
    c.params.validate();
    const TimeGrid grid = spectral_grid(c.T, c.params.g2, 2048);
    const PulseEnvelope pulse = make_pulse(c.pulse, c.T, grid);
    const auto pt = pulse_transmission(c.params, pulse, c.markov);
    double t0 = c.markov ? intensity_transmission(c.params, 0.0)
                         : std::norm(traveling_transfer(c.params, false).transmit(0.0));
    Cell cell{points[k], pt.warnings};
    cell.row.push_back(pt.value);
    cell.row.push_back(t0);
    return cell;
  });
  for (const auto& c : cells) {
    r.table.rows.push_back(c.row);
    add_unique(r.warnings, c.warnings);
  }
  r.report = {{"panel", cfg.panel}, {"rows", r.table.rows.size()}, {"markov", cfg.markov}};
  return r;
}

CommandResult cmd_two_photon(const RunConfig& cfg) {
  if (cfg.pulse == PulseShape::custom) throw std::invalid_argument("two-photon needs a square or gaussian pulse");
  const auto points = points_or_single(cfg);
  struct Point {
    ChannelReport report;
    RunConfig config;
    std::vector<std::pair<std::string, Table>> dumps;
  };
  const bool dump = cfg.dump_stride > 0 && points.size() == 1;
  const auto results = parallel_map(points.size(), [&](std::size_t k) {
    Point pt{{}, at_point(cfg, points[k]), {}};
    pt.config.params.validate();
    const PulseEnvelope pulse = two_photon_pulse(pt.config);
    const ChannelSet set = two_photon_channels(pt.config.geometry, pt.config.params, pulse);
    pt.report = channel_probabilities(set);
    if (dump) {
      for (const auto& w : set.channels) {
        const DenseMatrix m = w.materialize(cfg.dump_stride);
        Table t;
        t.columns = {"t1/T", "t2/T", "abs2"};
        for (std::size_t a = 0; a < m.size(); ++a)
          for (std::size_t b = 0; b < m.size(); ++b)
            t.rows.push_back({m.times[a] / pt.config.T, m.times[b] / pt.config.T, std::norm(m(a, b))});
        pt.dumps.emplace_back(to_string(w.channel()), std::move(t));
      }
    }
    return pt;
  });

  CommandResult r;
  r.table.columns = sweep_columns(cfg);
  const ChannelReport& first = results.front().report;
  for (const auto& c : first.channels) r.table.columns.push_back("P_" + c.channel);
  for (const auto& c : first.channels) r.table.columns.push_back("Plin_" + c.channel);
  for (const auto& n : first.nonlinear_norms) r.table.columns.push_back("norm_" + n.channel + "_" + n.part);
  r.table.columns.push_back("total");
  r.table.columns.push_back("residual");

  nlohmann::json reports = nlohmann::json::array();
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& rep = results[k].report;
    std::vector<double> row = points[k];
    for (const auto& c : rep.channels) row.push_back(c.probability);
    for (const auto& c : rep.channels) row.push_back(c.linear_probability);
    for (const auto& n : rep.nonlinear_norms) row.push_back(n.norm);
    row.push_back(rep.total);
    row.push_back(rep.conservation_residual);
    r.table.rows.push_back(std::move(row));
    add_unique(r.warnings, rep.diagnostics);

    nlohmann::json j;
    j["geometry"] = to_string(rep.geometry);
    j["parameters"] = dimensionless(results[k].config);
    for (const auto& c : rep.channels)
      j["channels"].push_back({{"channel", c.channel},
                               {"outcome", c.outcome},
                               {"probability", c.probability},
                               {"linear_probability", c.linear_probability}});
    for (const auto& n : rep.nonlinear_norms)
      j["nonlinear_norms"].push_back({{"channel", n.channel}, {"part", n.part}, {"norm", n.norm}});
    j["total"] = rep.total;
    j["linear_total"] = rep.linear_total;
    j["conservation_residual"] = rep.conservation_residual;
    j["tolerance"] = rep.tolerance;
    j["consistent"] = rep.consistent;
    reports.push_back(std::move(j));
  }
  r.report = points.size() == 1 ? reports.front() : nlohmann::json{{"points", reports}};
  if (cfg.dump_stride > 0 && !dump) r.warnings.push_back("wavefunction dumps are only written for a single point");
  if (dump) r.dumps = results.front().dumps;
  return r;
}

CommandResult run_command(const RunConfig& cfg) {
  if (cfg.command == "spectrum") return cmd_spectrum(cfg);
  if (cfg.command == "map") return cmd_map(cfg);
  if (cfg.command == "two-photon") return cmd_two_photon(cfg);
  if (cfg.command == "optimize") return cmd_optimize(cfg);
  if (cfg.command == "validate") return cmd_validate(cfg);
  throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

}  // namespace wgscat::cli
