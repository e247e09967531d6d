#include "run_config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wgscat::cli {

namespace {

// Application order: durations and couplings first so that T-scaled and
// g2-relative values see their final reference.
constexpr std::array<const char*, 16> kParameters = {
    "T",     "g2",     "g2T",    "delta",    "Delta",    "beta",     "phi",    "delay",
    "omega", "deltaT", "DeltaT", "betaT",    "delta/g2", "Delta/g2", "beta/g2", "delayT"};

std::size_t order_of(const std::string& name) {
  const auto it = std::find(kParameters.begin(), kParameters.end(), name);
  return static_cast<std::size_t>(it - kParameters.begin());
}

double parse_number(const std::string& text) {
  // Accept plain numbers and multiples of pi ("pi", "1.5pi", "-pi").
  std::string s = text;
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s.erase(s.size() - 2);
    if (s.empty() || s == "+") return factor;
    if (s == "-") return -factor;
    if (s.back() == '*') s.pop_back();
  }
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + text + "'");
  return v * factor;
}

}  // namespace

double SweepAxis::value(std::size_t i) const {
  if (n == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

bool is_sweep_parameter(const std::string& name) { return order_of(name) < kParameters.size(); }

SweepAxis parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 4) throw std::invalid_argument("sweep '" + text + "' is not of the form param:lo:hi:n");
  SweepAxis a;
  a.param = parts[0];
  if (!is_sweep_parameter(a.param)) throw std::invalid_argument("unknown sweep parameter '" + a.param + "'");
  try {
    a.lo = parse_number(parts[1]);
    a.hi = parse_number(parts[2]);
    const long n = std::stol(parts[3]);
    if (n < 1) throw std::invalid_argument("count");
    a.n = static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw std::invalid_argument("sweep '" + text + "' has a malformed range or count");
  }
  if (a.n == 1 && a.lo != a.hi) throw std::invalid_argument("single-point sweep '" + text + "' needs lo == hi");
  if (a.n > 1 && !(a.hi > a.lo)) throw std::invalid_argument("sweep '" + text + "' needs lo < hi");
  return a;
}

void apply_parameter(RunConfig& cfg, const std::string& name, double value) {
  SystemParams& p = cfg.params;
  if (name == "T") {
    if (!(value > 0.0)) throw std::invalid_argument("pulse duration must be positive");
    cfg.T = value;
  } else if (name == "g2") {
    p.g2 = value;
  } else if (name == "g2T") {
    p.g2 = value / cfg.T;
  } else if (name == "delta") {
    p.delta = value;
  } else if (name == "Delta") {
    p.Delta = value;
  } else if (name == "beta") {
    p.beta = value;
  } else if (name == "phi") {
    p.phi = value;
  } else if (name == "delay") {
    p.delay = value;
  } else if (name == "delayT") {
    p.delay = value * cfg.T;
  } else if (name == "omega") {
    cfg.omega_min = cfg.omega_max = value;
    cfg.omega_n = 1;
  } else if (name == "deltaT") {
    p.delta = value / cfg.T;
  } else if (name == "DeltaT") {
    p.Delta = value / cfg.T;
  } else if (name == "betaT") {
    p.beta = value / cfg.T;
  } else if (name == "delta/g2") {
    p.delta = value * p.g2;
  } else if (name == "Delta/g2") {
    p.Delta = value * p.g2;
  } else if (name == "beta/g2") {
    p.beta = value * p.g2;
  } else {
    throw std::invalid_argument("unknown parameter '" + name + "'");
  }
}

void apply_delta_rule(RunConfig& cfg) {
  SystemParams& p = cfg.params;
  switch (cfg.delta_rule) {
    case DeltaRule::fixed: break;
    case DeltaRule::abs_sin: p.Delta = p.g2 * std::abs(std::sin(p.phi)); break;
    case DeltaRule::unit_transmission: p.Delta = -p.delta * std::cos(p.phi) - p.g2 * std::sin(p.phi); break;
  }
}

std::vector<std::vector<double>> sweep_points(const std::vector<SweepAxis>& sweeps) {
  std::vector<std::vector<double>> points{{}};
  for (const auto& axis : sweeps) {
    std::vector<std::vector<double>> next;
    next.reserve(points.size() * axis.n);
    for (const auto& prefix : points)
      for (std::size_t i = 0; i < axis.n; ++i) {
        auto p = prefix;
        p.push_back(axis.value(i));
        next.push_back(std::move(p));
      }
    points = std::move(next);
  }
  return points;
}

RunConfig at_point(const RunConfig& cfg, const std::vector<double>& point) {
  RunConfig c = cfg;
  std::vector<std::size_t> idx(point.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return order_of(cfg.sweeps[a].param) < order_of(cfg.sweeps[b].param); });
  for (std::size_t i : idx) apply_parameter(c, cfg.sweeps[i].param, point[i]);
  apply_delta_rule(c);
  return c;
}

std::string to_string(DeltaRule rule) {
  switch (rule) {
    case DeltaRule::fixed: return "fixed";
    case DeltaRule::abs_sin: return "abs-sin";
    case DeltaRule::unit_transmission: return "unit-transmission";
  }
  return "fixed";
}

DeltaRule parse_delta_rule(const std::string& name) {
  if (name == "fixed") return DeltaRule::fixed;
  if (name == "abs-sin") return DeltaRule::abs_sin;
  if (name == "unit-transmission") return DeltaRule::unit_transmission;
  throw std::invalid_argument("unknown Delta rule '" + name + "'");
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["command"] = cfg.command;
  j["g2"] = cfg.params.g2;
  j["delta"] = cfg.params.delta;
  j["Delta"] = cfg.params.Delta;
  j["beta"] = cfg.params.beta;
  j["phi"] = cfg.params.phi;
  j["delay"] = cfg.params.delay;
  j["pulse"] = to_string(cfg.pulse);
  j["T"] = cfg.T;
  j["grid_n"] = cfg.grid_n;
  nlohmann::json sw = nlohmann::json::array();
  for (const auto& a : cfg.sweeps) sw.push_back({{"param", a.param}, {"lo", a.lo}, {"hi", a.hi}, {"n", a.n}});
  j["sweeps"] = sw;
  j["out"] = cfg.out;
  j["format"] = cfg.format;
  j["markov"] = cfg.markov;
  j["mode"] = cfg.mode;
  j["omega_min"] = cfg.omega_min;
  j["omega_max"] = cfg.omega_max;
  j["omega_n"] = cfg.omega_n;
  j["panel"] = cfg.panel;
  j["geometry"] = to_string(cfg.geometry);
  j["delta_rule"] = to_string(cfg.delta_rule);
  j["dump_stride"] = cfg.dump_stride;
  j["objective"] = cfg.objective;
  j["max_evaluations"] = cfg.max_evaluations;
  j["oracle_dt"] = cfg.oracle_dt;
  j["inject_fault"] = cfg.inject_fault;
  j["seed"] = cfg.seed;
  return j;
}

void merge_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  auto get = [&](const char* key, auto& dst) {
    if (j.contains(key)) dst = j.at(key).get<std::decay_t<decltype(dst)>>();
  };
  get("command", cfg.command);
  get("g2", cfg.params.g2);
  get("delta", cfg.params.delta);
  get("Delta", cfg.params.Delta);
  get("beta", cfg.params.beta);
  get("phi", cfg.params.phi);
  get("delay", cfg.params.delay);
  if (j.contains("pulse")) cfg.pulse = parse_pulse_shape(j.at("pulse").get<std::string>());
  get("T", cfg.T);
  get("grid_n", cfg.grid_n);
  if (j.contains("sweeps")) {
    cfg.sweeps.clear();
    for (const auto& s : j.at("sweeps")) {
      if (s.is_string()) {
        cfg.sweeps.push_back(parse_sweep(s.get<std::string>()));
      } else {
        std::ostringstream os;
        os << s.at("param").get<std::string>() << ':' << s.at("lo").get<double>() << ':'
           << s.at("hi").get<double>() << ':' << s.at("n").get<std::size_t>();
        SweepAxis a = parse_sweep(os.str());
        a.lo = s.at("lo").get<double>();  // keep full precision
        a.hi = s.at("hi").get<double>();
        cfg.sweeps.push_back(a);
      }
    }
  }
  get("out", cfg.out);
  get("format", cfg.format);
  get("markov", cfg.markov);
  get("mode", cfg.mode);
  get("omega_min", cfg.omega_min);
  get("omega_max", cfg.omega_max);
  get("omega_n", cfg.omega_n);
  get("panel", cfg.panel);
  if (j.contains("geometry")) cfg.geometry = parse_geometry(j.at("geometry").get<std::string>());
  if (j.contains("delta_rule")) cfg.delta_rule = parse_delta_rule(j.at("delta_rule").get<std::string>());
  get("dump_stride", cfg.dump_stride);
  get("objective", cfg.objective);
  get("max_evaluations", cfg.max_evaluations);
  get("oracle_dt", cfg.oracle_dt);
  get("inject_fault", cfg.inject_fault);
  get("seed", cfg.seed);
}

PulseEnvelope two_photon_pulse(const RunConfig& cfg) {
  if (cfg.pulse == PulseShape::custom) throw std::invalid_argument("custom pulses are not available from the command line");
  const TimeGrid grid = cfg.pulse == PulseShape::square ? default_grid(cfg.T, cfg.params.g2, cfg.grid_n)
                                                         : symmetric_grid(cfg.T, cfg.params.g2, cfg.grid_n);
  return make_pulse(cfg.pulse, cfg.T, grid);
}

}  // namespace wgscat::cli
