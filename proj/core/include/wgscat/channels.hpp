#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wgscat/wavefunction.hpp"

namespace wgscat {

enum class Geometry { standing, copropagating, counterpropagating };

std::string to_string(Geometry geometry);
Geometry parse_geometry(const std::string& name);

struct ChannelSet {
  Geometry geometry;
  std::shared_ptr<const ExcitationKernels> kernels;
  std::vector<TwoPhotonWavefunction> channels;

  const TwoPhotonWavefunction& operator[](Channel c) const;
};

// Both photons in the c standing-wave mode. Channels cc and dd.
ChannelSet standing_wave_channels(const SystemParams& p, const PulseEnvelope& pulse);

// Both photons incident from the left. Channels aa (both transmitted),
// bb (both reflected) and ab (one of each, weight 2 for the two orderings).
ChannelSet copropagating_channels(const SystemParams& p, const PulseEnvelope& pulse);

// One photon from each side. Channel aa carries both same-direction outcomes
// (weight 2 since the bb amplitude is identical); ab is the opposite-direction
// outcome.
ChannelSet counterpropagating_channels(const SystemParams& p, const PulseEnvelope& pulse);

ChannelSet two_photon_channels(Geometry geometry, const SystemParams& p, const PulseEnvelope& pulse);

struct ChannelProbability {
  std::string channel;
  std::string outcome;
  double probability = 0.0;
  double linear_probability = 0.0;
};

struct PartNorm {
  std::string channel;
  std::string part;
  double norm = 0.0;
};

struct ChannelReport {
  Geometry geometry = Geometry::standing;
  std::vector<ChannelProbability> channels;
  std::vector<PartNorm> nonlinear_norms;
  double total = 0.0;
  double linear_total = 0.0;
  double conservation_residual = 0.0;
  double tolerance = 5e-4;
  bool consistent = true;
  std::vector<std::string> diagnostics;

  double probability(std::string_view channel) const;
  double linear_probability(std::string_view channel) const;
  double part_norm(std::string_view channel, std::string_view part) const;
};

// Probabilities, linear-only probabilities and nonlinear part norms. A
// residual above ten times the tolerance marks the report inconsistent.
ChannelReport channel_probabilities(const ChannelSet& set, double tolerance = 5e-4);

}  // namespace wgscat
