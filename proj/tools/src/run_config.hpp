#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wgscat/channels.hpp"
#include "wgscat/params.hpp"
#include "wgscat/pulse.hpp"

namespace wgscat::cli {

// One sweep axis: `param:lo:hi:n`. A single point (n = 1) requires lo == hi.
struct SweepAxis {
  std::string param;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 1;

  double value(std::size_t i) const;
};

SweepAxis parse_sweep(const std::string& text);
bool is_sweep_parameter(const std::string& name);

// How Delta is tied to phi at every sweep point.
enum class DeltaRule { fixed, abs_sin, unit_transmission };

struct RunConfig {
  std::string command;
  SystemParams params;
  PulseShape pulse = PulseShape::square;
  double T = 1.0;
  std::size_t grid_n = 2048;
  std::vector<SweepAxis> sweeps;
  std::string out;              // empty: stdout
  std::string format = "csv";   // csv | json
  bool markov = true;

  // spectrum
  std::string mode = "transmit";  // transmit | c | d
  double omega_min = -5.0;        // in units of g2
  double omega_max = 5.0;
  std::size_t omega_n = 401;

  // map
  std::string panel = "a";  // a | b | c | d | custom

  // two-photon / optimize
  Geometry geometry = Geometry::standing;
  DeltaRule delta_rule = DeltaRule::fixed;
  std::size_t dump_stride = 0;  // 0: no |f|^2 dump
  std::string objective = "sorter";
  std::size_t max_evaluations = 200;

  // validate
  double oracle_dt = 1e-3;  // in units of 1/g2
  std::string inject_fault;  // "" | reflect-sign
  unsigned seed = 12345;
};

// Sets a sweepable parameter. Names ending in T are products with the pulse
// duration (g2T, deltaT, ...); names ending in /g2 are ratios to g2.
void apply_parameter(RunConfig& cfg, const std::string& name, double value);

// Applies the Delta rule to the current parameters.
void apply_delta_rule(RunConfig& cfg);

// Every point of the Cartesian product of the sweeps, first axis outermost.
// Each entry holds the parameter values in axis order.
std::vector<std::vector<double>> sweep_points(const std::vector<SweepAxis>& sweeps);

// Copy of the config with the given sweep point applied.
RunConfig at_point(const RunConfig& cfg, const std::vector<double>& point);

std::string to_string(DeltaRule rule);
DeltaRule parse_delta_rule(const std::string& name);

nlohmann::json to_json(const RunConfig& cfg);
// Fields absent from the JSON keep the values already in cfg.
void merge_json(RunConfig& cfg, const nlohmann::json& j);

// Pulse on the grid used for two-photon work.
PulseEnvelope two_photon_pulse(const RunConfig& cfg);

}  // namespace wgscat::cli
