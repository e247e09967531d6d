#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wgscat/channels.hpp"
#include "wgscat/linear.hpp"
#include "wgscat/oracle.hpp"

using namespace wgscat;
using std::numbers::pi;

namespace {

struct Discrepancy {
  double relative_l2 = 0.0;
  double probability_gap = 0.0;
};

// Closed-form channels sampled on the oracle record grid, against the oracle.
Discrepancy compare(const ChannelSet& set, const std::vector<OracleChannel>& oracle, const TimeGrid& grid) {
  const std::size_t stride = (grid.size() - 1 + 510) / 511;
  double num = 0.0, den = 0.0, gap = 0.0;
  for (const auto& c : oracle) {
    const DenseMatrix m = set[c.channel].materialize(stride, all_parts(), Side::mid);
    EXPECT_EQ(m.size(), c.values.size());
    for (std::size_t k = 0; k < m.data.size(); ++k) {
      num += std::norm(m.data[k] - c.values.data[k]);
      den += std::norm(m.data[k]);
    }
    gap = std::max(gap, std::abs(set[c.channel].probability() - c.probability));
  }
  return {std::sqrt(num / den), gap};
}

}  // namespace

TEST(Oracle, NoCouplingLeavesStateUntouched) {
  const TimeGrid g = aligned_grid(1.0, 2.0, 257);
  const PulseEnvelope f = make_pulse(PulseShape::square, 1.0, g);
  const auto state = evolve({.g2 = 0.0}, Geometry::standing, f);
  EXPECT_EQ(state.one_photon_norm, 0.0);
  EXPECT_EQ(state.psi_e, cplx(0.0));
  const auto channels = extract_two_photon(state);
  ASSERT_EQ(channels.size(), 2u);
  const DenseMatrix& cc = channels[0].values;
  for (std::size_t a = 0; a < cc.size(); ++a)
    for (std::size_t b = 0; b < cc.size(); ++b) {
      const std::size_t ia = *g.node_at(cc.times[a]), ib = *g.node_at(cc.times[b]);
      EXPECT_NEAR(std::abs(cc(a, b) - f.values()[ia] * f.values()[ib]), 0.0, 1e-14);
    }
  for (const auto& v : channels[1].values.data) EXPECT_EQ(v, cplx(0.0));
  EXPECT_NEAR(channels[0].probability + channels[1].probability, 1.0, 1e-4);
}

TEST(Oracle, SinglePhotonMatchesStandingWaveSpectrum) {
  // Both branch rates well away from zero so the record captures the full decay.
  const SystemParams p{.g2 = 1.0, .delta = 0.2, .Delta = 0.1, .phi = 2.0};
  const TimeGrid g(-4.0, 44.0, 60001);
  const PulseEnvelope f = make_pulse(PulseShape::gaussian, 2.0, g);
  const SpectralAmplitude in = to_spectrum(f);
  for (Branch b : {Branch::plus, Branch::minus}) {
    const auto out = evolve_single_photon(p, b, f);
    const int port = b == Branch::plus ? 0 : 1;
    const auto tf = standing_wave_transfer(p, b == Branch::plus ? TransferMode::c : TransferMode::d, true);
    const SpectralAmplitude sim = to_spectrum(g, out[port]);
    const SpectralAmplitude other = to_spectrum(g, out[1 - port]);
    double num = 0.0, den = 0.0, leak = 0.0;
    for (std::size_t k = 0; k < in.size(); ++k) {
      const cplx expected = tf(in.omega(k)) * in.values[k];
      num += std::norm(sim.values[k] - expected);
      den += std::norm(expected);
      leak += std::norm(other.values[k]);
    }
    EXPECT_LT(std::sqrt(num / den), 1e-3);
    EXPECT_LT(std::sqrt(leak / den), 1e-12);
  }
}

TEST(Oracle, RejectsCoarseStep) {
  const SystemParams p{.g2 = 1.0};
  const PulseEnvelope f = make_pulse(PulseShape::square, 1.0, oracle_grid(1.0, 1.0, 0.01, 11.0));
  EXPECT_THROW(evolve(p, Geometry::standing, f), PreconditionError);
  EXPECT_THROW(evolve_single_photon(p, Branch::plus, f), PreconditionError);
}

TEST(Oracle, ShortTailIsNotAsymptotic) {
  const SystemParams p{.g2 = 1.0};
  const PulseEnvelope f = make_pulse(PulseShape::square, 1.0, oracle_grid(1.0, 1.0, 1e-3, 2.0));
  const auto state = evolve(p, Geometry::standing, f);
  EXPECT_GT(state.one_photon_norm, 1e-6);
  EXPECT_THROW(extract_two_photon(state), PreconditionError);
}

TEST(Oracle, StandingWaveTwoPhotonMatchesClosedForm) {
  const SystemParams p{.g2 = 1.0};
  const PulseEnvelope f = make_pulse(PulseShape::square, 1.0, oracle_grid(1.0, 1.0, 1e-3, 11.0));
  const auto state = evolve(p, Geometry::standing, f);
  EXPECT_LT(state.norm_drift, 1e-4);
  const auto oracle = extract_two_photon(state);
  const ChannelSet set = standing_wave_channels(p, f);
  const Discrepancy d = compare(set, oracle, f.grid());
  EXPECT_LT(d.relative_l2, 1e-3);
  EXPECT_LT(d.probability_gap, 1e-3);
  double total = 0.0;
  for (const auto& c : oracle) total += c.probability;
  EXPECT_NEAR(total, 1.0, 1e-4);

  const auto psi_e = double_excitation_amplitude(*set.kernels);
  ASSERT_EQ(psi_e.size(), state.psi_e_trace.size());
  double linf = 0.0;
  for (std::size_t i = 0; i < psi_e.size(); ++i)
    linf = std::max(linf, std::abs(std::abs(psi_e[i]) - std::abs(state.psi_e_trace[i])));
  EXPECT_LT(linf, 1e-3);
}

TEST(Oracle, SorterPointAgreesWithClosedForm) {
  const SystemParams p{.g2 = 1.0, .Delta = 1.0, .phi = 1.5 * pi};
  const PulseEnvelope f = make_pulse(PulseShape::square, 0.91, oracle_grid(0.91, 1.0, 1e-3, 11.0));
  const auto oracle = extract_two_photon(evolve(p, Geometry::standing, f));
  const auto report = channel_probabilities(standing_wave_channels(p, f));
  for (const auto& c : oracle)
    EXPECT_NEAR(c.probability, report.probability(to_string(c.channel)), 1e-3) << to_string(c.channel);
}
