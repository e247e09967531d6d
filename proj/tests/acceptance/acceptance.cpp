// Acceptance checks, one per criterion. Usage: acceptance <n> [<n> ...] or
// acceptance all. Prints one PASS/FAIL line per criterion; exit status 1 if
// any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "wgscat/channels.hpp"
#include "wgscat/linear.hpp"
#include "wgscat/oracle.hpp"

using namespace wgscat;
using std::numbers::pi;

namespace {

const cplx kI{0.0, 1.0};

struct Verdict {
  bool pass = false;
  std::string observed;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict standing_phase() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 10000; ++s) {
    const SystemParams p{.g2 = 3.0 * u(rng), .delta = 6.0 * u(rng) - 3.0, .Delta = 6.0 * u(rng) - 3.0,
                         .phi = 2.0 * pi * u(rng), .delay = 0.5 * u(rng)};
    const double w = 20.0 * u(rng) - 10.0;
    for (TransferMode m : {TransferMode::c, TransferMode::d})
      worst = std::max(worst, std::abs(std::abs(standing_wave_transfer(p, m, false)(w)) - 1.0));
  }
  return {worst < 1e-12, fmt("max ||ratio| - 1| = %.3g over 1e4 samples (bound 1e-12)", worst)};
}

Verdict traveling_unitarity() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    SystemParams p{.g2 = 1.0, .delta = u(rng), .Delta = u(rng)};
    for (int i = 0; i < 200; ++i) {
      p.phi = 2.0 * pi * i / 200.0;
      const auto tr = traveling_transfer(p, true);
      for (int k = 0; k < 200; ++k) {
        const double w = -5.0 + 10.0 * k / 199.0;
        worst = std::max(worst, std::abs(std::norm(tr.transmit(w)) + std::norm(tr.reflect(w)) - 1.0));
      }
    }
  }
  return {worst < 1e-10, fmt("max ||t|^2 + |r|^2 - 1| = %.3g on 20 x 200 x 200 points (bound 1e-10)", worst)};
}

Verdict cavity_equivalence() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double vs_transfer = 0.0, vs_formula = 0.0;
  for (int s = 0; s < 20000; ++s) {
    const SystemParams p{.g2 = 0.05 + 3.0 * u(rng), .delta = 6.0 * u(rng) - 3.0, .phi = 2.0 * pi * u(rng)};
    const double w = 10.0 * u(rng) - 5.0;
    const auto c = cavity_compose(beamsplitter_coeffs(p, -0.5, w), beamsplitter_coeffs(p, 0.5, w));
    const auto tr = traveling_transfer(p, true);
    vs_transfer = std::max({vs_transfer, std::abs(c.transmit - tr.transmit(w)), std::abs(c.reflect - tr.reflect(w))});
    // Written-out transmission and reflection; the composition gives the
    // reflection with the opposite overall sign.
    const double x = w + p.delta;
    const cplx d = p.g2 - kI * x, e2 = std::exp(2.0 * kI * p.phi);
    const cplx den = d * d - p.g2 * p.g2 * e2;
    const cplx t = -x * x / den;
    const cplx r = p.g2 * std::exp(-kI * p.phi) * ((1.0 + e2) * d - 2.0 * p.g2 * e2) / den;
    vs_formula = std::max({vs_formula, std::abs(c.transmit - t), std::abs(c.reflect + r)});
  }
  const double worst = std::max(vs_transfer, vs_formula);
  return {worst < 1e-10, fmt("max deviation %.3g vs transfer functions, %.3g vs written-out forms (bound 1e-10)",
                             vs_transfer, vs_formula)};
}

Verdict flat_window() {
  const SystemParams p{.g2 = 1.0, .Delta = 1.0, .phi = 1.5 * pi};
  double pulse_dev = 0.0;
  for (PulseShape shape : {PulseShape::square, PulseShape::gaussian})
    for (double g2T : {0.3, 1.0, 3.0}) {
      const TimeGrid grid = spectral_grid(g2T, p.g2, 2048);
      pulse_dev = std::max(pulse_dev, std::abs(pulse_transmission(p, make_pulse(shape, g2T, grid)).value - 1.0));
    }
  double refl = 0.0;
  const auto tr = traveling_transfer(p, true);
  for (int i = 0; i <= 20000; ++i) refl = std::max(refl, std::abs(tr.reflect(-50.0 + 0.005 * i)));
  return {pulse_dev < 1e-6 && refl < 1e-12,
          fmt("max |pulse transmission - 1| = %.3g (bound 1e-6), max |r| = %.3g (bound 1e-12)", pulse_dev, refl)};
}

Verdict sorter() {
  cli::RunConfig c;
  c.command = "optimize";
  c.objective = "sorter";
  c.params.phi = 1.5 * pi;
  c.delta_rule = cli::DeltaRule::abs_sin;  // Delta = g2 at phi = 3 pi / 2
  c.grid_n = 2048;
  c.sweeps = {cli::parse_sweep("g2T:0.5:1.5:11")};
  const auto r = cli::run_command(c);
  const double g2T = r.report["optimum"]["g2T"].get<double>();
  const double P = r.report["value"].get<double>();
  const bool pass = std::abs(g2T - 0.91) <= 0.03 && std::abs(P - 0.593) <= 0.01;
  return {pass, fmt("optimum g2T = %.4f (expected 0.91 +- 0.03), P_dd = %.4f (expected 0.593 +- 0.01)", g2T, P)};
}

Verdict counter_passage() {
  const SystemParams p{.g2 = 1.0, .Delta = std::abs(std::sin(1.5 * pi)), .phi = 1.5 * pi};
  const PulseEnvelope f = make_pulse(PulseShape::square, 1.0, default_grid(1.0, 1.0, 2048));
  const auto report = channel_probabilities(counterpropagating_channels(p, f));
  const double P = report.probability("ab");
  const double ent = report.part_norm("ab", "entangled_minus");
  return {std::abs(P - 1.0) <= 5e-4 && ent > 0.01,
          fmt("P(opposite) = %.7f (1 +- 5e-4), ||entangled_minus|| = %.4f (> 0.01)", P, ent)};
}

Verdict cancellations() {
  double worst = 0.0;
  for (double g2T : {0.3, 1.0, 3.0}) {
    const SystemParams p{.g2 = 1.0, .Delta = 1.0, .phi = 1.5 * pi};
    const PulseEnvelope f = make_pulse(PulseShape::square, g2T, default_grid(g2T, 1.0, 1024));
    const ChannelSet co = copropagating_channels(p, f);
    const ChannelSet counter = counterpropagating_channels(p, f);
    worst = std::max({worst, co[Channel::ab].max_abs(part_named("doubly_minus")),
                      co[Channel::bb].max_abs(part_named("pair_minus")),
                      co[Channel::ab].max_abs(part_named("pair_split")),
                      counter[Channel::aa].max_abs(part_named("entangled_plus"))});
  }
  return {worst < 1e-12, fmt("max |vanishing part| = %.3g (bound 1e-12)", worst)};
}

Verdict conservation() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  std::string where;
  const Geometry geos[] = {Geometry::standing, Geometry::copropagating, Geometry::counterpropagating};
  for (int s = 0; s < 50; ++s) {
    const Geometry g = geos[s % 3];
    const double T = 0.1 + 9.9 * u(rng);
    const SystemParams p{.g2 = 1.0, .delta = 4.0 * u(rng) - 2.0, .Delta = 4.0 * u(rng) - 2.0,
                         .beta = 4.0 * u(rng) - 2.0, .phi = 2.0 * pi * u(rng)};
    const PulseEnvelope f = make_pulse(PulseShape::square, T, default_grid(T, p.g2, 2048));
    const double res = channel_probabilities(two_photon_channels(g, p, f)).conservation_residual;
    if (res > worst) {
      worst = res;
      where = to_string(g) + ", " + describe(p) + fmt(", g2T = %.3f", T);
    }
  }
  return {worst < 5e-4, fmt("max |sum P - 1| = %.3g over 50 configurations (bound 5e-4); worst at ", worst) + where};
}

struct OracleGap {
  double amplitude = 0.0;  // relative L2 over all channels
  double doubly = 0.0;     // L-infinity of | |psi_e| - |psi_e oracle| |
};

OracleGap oracle_gap(const SystemParams& p, Geometry g, double T, double dt) {
  // The slower collective branch sets how long the emitters take to empty.
  const DecayRates r = rates(p);
  const double tail = std::max(11.0, 8.0 * p.g2 / std::min(r.gamma_c, r.gamma_s));
  const PulseEnvelope f = make_pulse(PulseShape::square, T, oracle_grid(T, p.g2, dt, tail));
  const WavefunctionState state = evolve(p, g, f);
  const auto oracle = extract_two_photon(state);
  const ChannelSet set = two_photon_channels(g, p, f);
  const std::size_t stride = (f.grid().size() - 1 + 510) / 511;
  double num = 0.0, den = 0.0;
  for (const auto& c : oracle) {
    const DenseMatrix m = set[c.channel].materialize(stride, all_parts(), Side::mid);
    for (std::size_t k = 0; k < m.data.size(); ++k) {
      num += std::norm(m.data[k] - c.values.data[k]);
      den += std::norm(m.data[k]);
    }
  }
  // Input weights of the c c and d d components of the photon pair.
  double w_plus = 1.0, w_minus = 0.0;
  if (g == Geometry::copropagating) w_plus = w_minus = 0.5;
  if (g == Geometry::counterpropagating) {
    w_plus = 1.0 / std::numbers::sqrt2;
    w_minus = -1.0 / std::numbers::sqrt2;
  }
  const auto plus = double_excitation_amplitude(*set.kernels, Branch::plus);
  const auto minus = double_excitation_amplitude(*set.kernels, Branch::minus);
  double linf = 0.0;
  for (std::size_t i = 0; i < plus.size(); ++i) {
    const cplx psi = w_plus * plus[i] + w_minus * minus[i];
    linf = std::max(linf, std::abs(std::abs(psi) - std::abs(state.psi_e_trace[i])));
  }
  return {std::sqrt(num / den), linf};
}

Verdict oracle_equivalence() {
  struct Case {
    Geometry g;
    SystemParams p;
  };
  const Case cases[] = {
      {Geometry::standing, {.g2 = 1.0, .delta = 0.3, .Delta = 0.2, .beta = 0.4, .phi = 1.2}},
      {Geometry::copropagating, {.g2 = 1.0, .delta = -0.2, .Delta = -0.3, .beta = 0.3, .phi = 2.0}},
      {Geometry::counterpropagating, {.g2 = 1.0, .delta = 0.4, .Delta = 0.3, .beta = 0.5, .phi = 4.3}},
  };
  bool pass = true;
  std::ostringstream os;
  for (const auto& c : cases) {
    const OracleGap coarse = oracle_gap(c.p, c.g, 1.0, 1e-3);
    const OracleGap fine = oracle_gap(c.p, c.g, 1.0, 5e-4);
    const double ratio = coarse.amplitude / fine.amplitude;
    const bool ok = coarse.amplitude < 1e-3 && coarse.doubly < 1e-3 && ratio > 3.0 && ratio < 5.0;
    pass = pass && ok;
    os << to_string(c.g) << ": rel L2 " << fmt("%.3g", coarse.amplitude) << " -> " << fmt("%.3g", fine.amplitude)
       << " (ratio " << fmt("%.2f", ratio) << "), |psi_e| Linf " << fmt("%.3g", coarse.doubly) << "; ";
  }
  os << "bounds: rel L2 and |psi_e| < 1e-3 at dt g2 = 1e-3, halving ratio in (3, 5)";
  return {pass, os.str()};
}

cli::CommandResult map_panel(const std::string& panel, const std::vector<std::string>& axes) {
  cli::RunConfig c;
  c.command = "map";
  c.panel = panel;
  for (const auto& a : axes) c.sweeps.push_back(cli::parse_sweep(a));
  return cli::run_command(c);
}

Verdict map_anchors() {
  std::ostringstream os;
  bool pass = true;

  // Panel (b): the carrier transmission ridge along phi = -atan(10 / g2T).
  double ridge = 0.0;
  for (double g2T : {2.0, 5.0, 10.0, 15.0}) {
    const double phi = -std::atan(10.0 / g2T);
    const auto r = map_panel("b", {fmt("phi:%.17g:%.17g:1", phi, phi), fmt("g2T:%.17g:%.17g:1", g2T, g2T)});
    ridge = std::max(ridge, std::abs(r.table.rows[0][3] - 1.0));
  }
  pass = pass && ridge <= 0.02;
  os << fmt("(b) max |T(0) - 1| on ridge %.3g; ", ridge);

  // Panel (c): flat window at Delta = g2, i.e. g2T = 10, phi = 3 pi / 2.
  const auto c = map_panel("c", {fmt("phi:%.17g:%.17g:1", 1.5 * pi, 1.5 * pi), "g2T:10:10:1"});
  const double tc = c.table.rows[0][2];
  pass = pass && std::abs(tc - 1.0) <= 0.02;
  os << fmt("(c) transmission %.4f at g2T = 10, phi = 3pi/2; ", tc);

  // Panel (d): high reflection near phi = 0.
  const auto d = map_panel("d", {"phi:0:0:1", "g2T:15:15:1"});
  const double td = d.table.rows[0][2];
  pass = pass && td < 0.05;
  os << fmt("(d) transmission %.4f at g2T = 15, phi = 0; ", td);

  double slowest = 0.0;
  for (const char* panel : {"a", "b", "c", "d"}) {
    const auto t0 = Clock::now();
    const auto full = map_panel(panel, {});
    slowest = std::max(slowest, seconds_since(t0));
    pass = pass && full.table.rows.size() == 10000;
  }
  pass = pass && slowest < 300.0;
  os << fmt("slowest full 100 x 100 panel %.1f s (limit 300 s); tolerance +- 0.02", slowest);
  return {pass, os.str()};
}

struct Criterion {
  int id;
  double time_limit;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, 1.0, standing_phase},       {2, 5.0, traveling_unitarity},   {3, 2.0, cavity_equivalence},
      {4, 2.0, flat_window},          {5, 60.0, sorter},               {6, 30.0, counter_passage},
      {7, 10.0, cancellations},       {8, 600.0, conservation},        {9, 600.0, oracle_equivalence},
      {10, 1200.0, map_anchors},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "all") {
      for (const auto& c : all) selected.push_back(c.id);
    } else {
      selected.push_back(std::stoi(a));
    }
  }
  if (selected.empty())
    for (const auto& c : all) selected.push_back(c.id);

  int failures = 0;
  for (int id : selected) {
    const Criterion* c = nullptr;
    for (const auto& x : all)
      if (x.id == id) c = &x;
    if (!c) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c->check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = seconds_since(t0);
    const bool in_time = elapsed < c->time_limit;
    const bool pass = v.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("criterion %d: %s  %s; runtime %.2f s (limit %.0f s)%s\n", id, pass ? "PASS" : "FAIL",
                v.observed.c_str(), elapsed, c->time_limit, in_time ? "" : " [too slow]");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
