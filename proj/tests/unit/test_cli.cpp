#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "commands.hpp"

using namespace wgscat;
using namespace wgscat::cli;
using std::numbers::pi;

namespace {

RunConfig config(const std::string& command) {
  RunConfig c;
  c.command = command;
  return c;
}

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return i;
  ADD_FAILURE() << "no column " << name;
  return 0;
}

// Row of a spectrum table at omega = 0 on the default symmetric frequency axis.
const std::vector<double>& zero_frequency_row(const Table& t) {
  const std::size_t w = column(t, "omega/g2");
  for (const auto& row : t.rows)
    if (std::abs(row[w]) < 1e-12) return row;
  ADD_FAILURE() << "no omega = 0 row";
  return t.rows.front();
}

}  // namespace

TEST(Sweep, ParsesRangesAndMultiplesOfPi) {
  const SweepAxis a = parse_sweep("phi:0:1.5pi:4");
  EXPECT_EQ(a.param, "phi");
  EXPECT_DOUBLE_EQ(a.hi, 1.5 * pi);
  EXPECT_EQ(a.n, 4u);
  EXPECT_DOUBLE_EQ(a.value(3), 1.5 * pi);
  EXPECT_DOUBLE_EQ(parse_sweep("phi:-pi:pi:3").value(1), 0.0);
}

TEST(Sweep, RejectsBadAxes) {
  EXPECT_THROW(parse_sweep("nonsense:0:1:3"), std::invalid_argument);
  EXPECT_THROW(parse_sweep("phi:1:0:3"), std::invalid_argument);
  EXPECT_THROW(parse_sweep("phi:0:1:1"), std::invalid_argument);
  EXPECT_THROW(parse_sweep("phi:0:1"), std::invalid_argument);
  EXPECT_NO_THROW(parse_sweep("phi:1:1:1"));
}

TEST(Sweep, CartesianOrderFirstAxisOutermost) {
  const auto pts = sweep_points({parse_sweep("g2T:1:2:2"), parse_sweep("phi:0:1:3")});
  ASSERT_EQ(pts.size(), 6u);
  EXPECT_EQ(pts[1], (std::vector<double>{1.0, 0.5}));
  EXPECT_EQ(pts[3], (std::vector<double>{2.0, 0.0}));
}

TEST(Parameters, DimensionlessNames) {
  RunConfig c = config("two-photon");
  c.T = 2.0;
  apply_parameter(c, "deltaT", 10.0);
  apply_parameter(c, "Delta/g2", 0.5);
  EXPECT_DOUBLE_EQ(c.params.delta, 5.0);
  EXPECT_DOUBLE_EQ(c.params.Delta, 0.5);
  apply_parameter(c, "g2T", 4.0);
  EXPECT_DOUBLE_EQ(c.params.g2, 2.0);
}

TEST(Parameters, AbsSinRule) {
  RunConfig c = config("two-photon");
  c.delta_rule = DeltaRule::abs_sin;
  c.params.phi = 1.5 * pi;
  apply_delta_rule(c);
  EXPECT_NEAR(c.params.Delta, c.params.g2, 1e-15);
}

TEST(Config, JsonRoundTrip) {
  RunConfig c = config("two-photon");
  c.params = {.g2 = 1.5, .delta = 0.2, .Delta = -0.3, .beta = 0.1, .phi = 2.0, .delay = 0.0};
  c.T = 0.7;
  c.geometry = Geometry::counterpropagating;
  c.delta_rule = DeltaRule::abs_sin;
  c.sweeps = {parse_sweep("phi:0:pi:5")};
  c.format = "json";
  RunConfig back;
  merge_json(back, to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, MergeKeepsAbsentFields) {
  RunConfig c = config("spectrum");
  c.params.delta = 0.4;
  merge_json(c, nlohmann::json{{"g2", 2.0}});
  EXPECT_DOUBLE_EQ(c.params.g2, 2.0);
  EXPECT_DOUBLE_EQ(c.params.delta, 0.4);
}

TEST(Output, DeterministicAndCarriesConfig) {
  RunConfig c = config("map");
  c.sweeps = {parse_sweep("phi:-pi:pi:7"), parse_sweep("g2T:0.5:2:3")};
  const std::string a = to_csv(run_command(c).table, to_json(c));
  const std::string b = to_csv(run_command(c).table, to_json(c));
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.rfind("# config: ", 0), 0u);
  const auto line = a.substr(10, a.find('\n') - 10);
  RunConfig back;
  merge_json(back, nlohmann::json::parse(line));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Spectrum, NoCouplingTransmitsEverything) {
  RunConfig c = config("spectrum");
  c.params.g2 = 0.0;
  const Table t = run_command(c).table;
  const std::size_t col = column(t, "T");
  for (const auto& row : t.rows) EXPECT_EQ(row[col], 1.0);
}

TEST(Spectrum, TransmissionWindowsAtCarrier) {
  for (double d : {0.1, 0.4, 0.7, 1.0}) {
    RunConfig c = config("spectrum");
    c.params.delta = d;
    c.params.phi = -std::atan(d);
    const Table t = run_command(c).table;
    EXPECT_NEAR(zero_frequency_row(t)[column(t, "T")], 1.0, 1e-12) << "delta " << d;
  }
  RunConfig c = config("spectrum");
  c.params.Delta = 1.0;
  c.params.phi = -std::asin(1.0);
  const Table t = run_command(c).table;
  EXPECT_NEAR(zero_frequency_row(t)[column(t, "T")], 1.0, 1e-12);
}

TEST(Map, ShortPulsesPassPanelA) {
  RunConfig c = config("map");
  c.sweeps = {parse_sweep("phi:0:pi:3"), parse_sweep("g2T:0.001:0.001:1")};
  const Table t = run_command(c).table;
  for (const auto& row : t.rows) EXPECT_GT(row[column(t, "transmission")], 0.99);
}

TEST(TwoPhoton, NoCouplingTrivialAssignment) {
  for (Geometry g : {Geometry::standing, Geometry::copropagating, Geometry::counterpropagating}) {
    RunConfig c = config("two-photon");
    c.params.g2 = 0.0;
    c.geometry = g;
    c.grid_n = 512;
    const Table t = run_command(c).table;
    const std::string main = g == Geometry::standing ? "P_cc" : g == Geometry::copropagating ? "P_aa" : "P_ab";
    EXPECT_NEAR(t.rows[0][column(t, main)], 1.0, 1e-10) << to_string(g);
    EXPECT_NEAR(t.rows[0][column(t, "total")], 1.0, 1e-10);
  }
}

TEST(TwoPhoton, CounterpropagatingUnitPassage) {
  RunConfig c = config("two-photon");
  c.geometry = Geometry::counterpropagating;
  c.delta_rule = DeltaRule::abs_sin;
  c.params.phi = 1.5 * pi;
  const Table t = run_command(c).table;
  EXPECT_NEAR(t.rows[0][column(t, "P_ab")], 1.0, 5e-4);
}

TEST(TwoPhoton, CopropagatingFlatWindowReflectsPairs) {
  RunConfig c = config("two-photon");
  c.geometry = Geometry::copropagating;
  c.delta_rule = DeltaRule::abs_sin;
  c.params.phi = 1.5 * pi;
  const Table t = run_command(c).table;
  EXPECT_LT(t.rows[0][column(t, "P_ab")], 1e-10);
  EXPECT_GT(t.rows[0][column(t, "P_bb")], 0.1);
  EXPECT_LT(t.rows[0][column(t, "Plin_bb")], 1e-10);
}

TEST(TwoPhoton, DumpOnlyForSinglePoint) {
  RunConfig c = config("two-photon");
  c.grid_n = 256;
  c.dump_stride = 16;
  const auto r = run_command(c);
  ASSERT_EQ(r.dumps.size(), 2u);
  EXPECT_EQ(r.dumps[0].second.columns.size(), 3u);
  c.sweeps = {parse_sweep("phi:0:1:2")};
  const auto s = run_command(c);
  EXPECT_TRUE(s.dumps.empty());
  EXPECT_FALSE(s.warnings.empty());
}

TEST(Optimize, NoCouplingGivesZero) {
  RunConfig c = config("optimize");
  c.params.g2 = 0.0;
  c.sweeps = {parse_sweep("phi:1.25pi:1.75pi:3")};
  c.grid_n = 256;
  const auto r = run_command(c);
  EXPECT_EQ(r.report["value"].get<double>(), 0.0);
}

TEST(Optimize, LinearityFindsCancellation) {
  RunConfig c = config("optimize");
  c.objective = "linearity";
  c.params.delta = 0.5;
  c.T = 10.0;
  c.sweeps = {parse_sweep("beta/g2:-2:2:9"), parse_sweep("Delta/g2:-2:2:9")};
  const auto r = run_command(c);
  EXPECT_NEAR(r.report["optimum"]["beta/g2"].get<double>(), 1.0, 0.05);
  EXPECT_NEAR(r.report["optimum"]["Delta/g2"].get<double>(), 0.5, 0.05);
}

TEST(Optimize, RejectsUnknownObjective) {
  RunConfig c = config("optimize");
  c.objective = "nothing";
  EXPECT_THROW(run_command(c), std::invalid_argument);
}

TEST(Validate, DefaultRunPasses) {
  const auto r = run_command(config("validate"));
  EXPECT_EQ(r.exit_code, 0) << r.report.dump();
  EXPECT_TRUE(r.report["passed"].get<bool>());
}

TEST(Validate, SignFaultCaughtByCavitySuiteOnly) {
  RunConfig c = config("validate");
  c.inject_fault = "reflect-sign";
  const auto r = run_command(c);
  EXPECT_EQ(r.exit_code, 3);
  for (const auto& s : r.report["suites"]) {
    const std::string name = s["suite"];
    const std::string result = s["result"];
    EXPECT_EQ(result, name == "cavity-equivalence" ? "fail" : "pass") << name;
  }
}

TEST(Validate, CoarseOracleStepRejected) {
  RunConfig c = config("validate");
  c.oracle_dt = 0.01;
  const auto r = run_command(c);
  EXPECT_EQ(r.exit_code, 2);
  bool rejected = false;
  for (const auto& s : r.report["suites"])
    if (s["suite"] == "oracle") rejected = s["result"] == "rejected";
  EXPECT_TRUE(rejected);
}
