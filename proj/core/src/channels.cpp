#include "wgscat/channels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace wgscat {

std::string to_string(Geometry geometry) {
  switch (geometry) {
    case Geometry::standing: return "standing";
    case Geometry::copropagating: return "copropagating";
    case Geometry::counterpropagating: return "counterpropagating";
  }
  return "?";
}

Geometry parse_geometry(const std::string& name) {
  if (name == "standing") return Geometry::standing;
  if (name == "copropagating" || name == "co") return Geometry::copropagating;
  if (name == "counterpropagating" || name == "counter") return Geometry::counterpropagating;
  throw std::invalid_argument("unknown geometry '" + name + "'");
}

const TwoPhotonWavefunction& ChannelSet::operator[](Channel c) const {
  for (const auto& w : channels)
    if (w.channel() == c) return w;
  throw std::out_of_range("channel " + to_string(c) + " not present for " + to_string(geometry));
}

namespace {

struct Coupling {
  double gc;
  double gs;
};

Coupling coupling(const ExcitationKernels& k) { return {k.rates.gamma_c, k.rates.gamma_s}; }

// Transmitted and reflected single-photon amplitudes over (f, G+, G-).
FactorCoeffs transmitted(Coupling c) { return {1.0, -c.gc, -c.gs}; }
FactorCoeffs reflected(Coupling c) { return {0.0, -c.gc, c.gs}; }

// Pair-absorption term -(gc G+ + x gs G-)(gc e+ G+ + y gs e- G-) at the early time.
OrderedForm pair_product(Coupling c, double x, double y) {
  OrderedForm f;
  f.pair[0] = {-c.gc * c.gc, -x * c.gc * c.gs, 0.0};
  f.pair[1] = {0.0, -y * c.gc * c.gs, -x * y * c.gs * c.gs};
  return f;
}

// (gc e+ + x gs e-)(gc E+ + y gs E-).
OrderedForm doubly_product(Coupling c, double x, double y) {
  OrderedForm f;
  f.doubly[0] = {c.gc * c.gc, y * c.gc * c.gs};
  f.doubly[1] = {x * c.gs * c.gc, x * y * c.gs * c.gs};
  return f;
}

// -(gc^2 e+ G+^2 - x gs^2 e- G-^2) + (gc e+ + x gs e-)(gc E+ - gs E-).
OrderedForm entangled(Coupling c, double x) {
  OrderedForm f = doubly_product(c, x, -1.0);
  f.pair[0] = {-c.gc * c.gc, 0.0, 0.0};
  f.pair[1] = {0.0, 0.0, x * c.gs * c.gs};
  return f;
}

std::shared_ptr<const ExcitationKernels> build_kernels(const SystemParams& p, const PulseEnvelope& pulse) {
  return std::make_shared<const ExcitationKernels>(excitation_kernels(p, pulse));
}

}  // namespace

ChannelSet standing_wave_channels(const SystemParams& p, const PulseEnvelope& pulse) {
  auto k = build_kernels(p, pulse);
  const Coupling c = coupling(*k);
  const FactorCoeffs out = {1.0, -2.0 * c.gc, 0.0};

  OrderedForm pair;
  pair.pair[0][0] = -4.0 * c.gc * c.gc;
  OrderedForm doubly_c;
  doubly_c.doubly[0][0] = 4.0 * c.gc * c.gc;
  OrderedForm doubly_d;
  doubly_d.doubly[1][0] = 4.0 * c.gc * c.gs;

  ChannelSet set{Geometry::standing, k, {}};
  set.channels.emplace_back(Channel::cc, "c port", 1.0, k,
                            std::vector<WavefunctionPart>{
                                WavefunctionPart::symmetric("linear", PartKind::linear, OrderedForm::outer(out, out)),
                                WavefunctionPart::symmetric("pair", PartKind::pair, pair),
                                WavefunctionPart::symmetric("doubly", PartKind::doubly, doubly_c),
                            });
  set.channels.emplace_back(Channel::dd, "d port", 1.0, k,
                            std::vector<WavefunctionPart>{
                                WavefunctionPart::symmetric("doubly", PartKind::doubly, doubly_d),
                            });
  return set;
}

ChannelSet copropagating_channels(const SystemParams& p, const PulseEnvelope& pulse) {
  auto k = build_kernels(p, pulse);
  const Coupling c = coupling(*k);
  const FactorCoeffs tau = transmitted(c);
  const FactorCoeffs rho = reflected(c);

  const OrderedForm doubly_plus = doubly_product(c, +1.0, +1.0);
  const OrderedForm doubly_minus = doubly_product(c, -1.0, +1.0);

  // The split pair term flips the sign of its G- pieces across the diagonal.
  WavefunctionPart split{"pair_split", PartKind::pair, pair_product(c, -1.0, +1.0), pair_product(c, +1.0, -1.0)};
  WavefunctionPart split_linear{"linear", PartKind::linear, OrderedForm::outer(tau, rho), OrderedForm::outer(rho, tau)};

  ChannelSet set{Geometry::copropagating, k, {}};
  set.channels.emplace_back(
      Channel::aa, "both transmitted", 1.0, k,
      std::vector<WavefunctionPart>{
          WavefunctionPart::symmetric("linear", PartKind::linear, OrderedForm::outer(tau, tau)),
          WavefunctionPart::symmetric("pair_plus", PartKind::pair, pair_product(c, +1.0, +1.0)),
          WavefunctionPart::symmetric("doubly_plus", PartKind::doubly, doubly_plus),
      });
  set.channels.emplace_back(
      Channel::bb, "both reflected", 1.0, k,
      std::vector<WavefunctionPart>{
          WavefunctionPart::symmetric("linear", PartKind::linear, OrderedForm::outer(rho, rho)),
          WavefunctionPart::symmetric("pair_minus", PartKind::pair, pair_product(c, -1.0, -1.0)),
          WavefunctionPart::symmetric("doubly_plus", PartKind::doubly, doubly_plus),
      });
  set.channels.emplace_back(Channel::ab, "split", 2.0, k,
                            std::vector<WavefunctionPart>{
                                split_linear,
                                split,
                                WavefunctionPart::symmetric("doubly_minus", PartKind::doubly, doubly_minus),
                            });
  return set;
}

ChannelSet counterpropagating_channels(const SystemParams& p, const PulseEnvelope& pulse) {
  auto k = build_kernels(p, pulse);
  const Coupling c = coupling(*k);
  const FactorCoeffs tau = transmitted(c);
  const FactorCoeffs rho = reflected(c);

  OrderedForm same = OrderedForm::outer(tau, rho, 1.0 / std::numbers::sqrt2);
  same += OrderedForm::outer(rho, tau, 1.0 / std::numbers::sqrt2);
  OrderedForm opposite = OrderedForm::outer(tau, tau);
  opposite += OrderedForm::outer(rho, rho);

  OrderedForm ent_plus = entangled(c, +1.0);
  ent_plus *= std::numbers::sqrt2;
  OrderedForm ent_minus = entangled(c, -1.0);
  ent_minus *= 2.0;

  ChannelSet set{Geometry::counterpropagating, k, {}};
  set.channels.emplace_back(Channel::aa, "same direction", 2.0, k,
                            std::vector<WavefunctionPart>{
                                WavefunctionPart::symmetric("linear", PartKind::linear, same),
                                WavefunctionPart::symmetric("entangled_plus", PartKind::mixed, ent_plus),
                            });
  set.channels.emplace_back(Channel::ab, "opposite directions", 1.0, k,
                            std::vector<WavefunctionPart>{
                                WavefunctionPart::symmetric("linear", PartKind::linear, opposite),
                                WavefunctionPart::symmetric("entangled_minus", PartKind::mixed, ent_minus),
                            });
  return set;
}

ChannelSet two_photon_channels(Geometry geometry, const SystemParams& p, const PulseEnvelope& pulse) {
  switch (geometry) {
    case Geometry::standing: return standing_wave_channels(p, pulse);
    case Geometry::copropagating: return copropagating_channels(p, pulse);
    case Geometry::counterpropagating: return counterpropagating_channels(p, pulse);
  }
  throw std::invalid_argument("unknown geometry");
}

double ChannelReport::probability(std::string_view channel) const {
  for (const auto& c : channels)
    if (c.channel == channel) return c.probability;
  throw std::out_of_range("no channel '" + std::string(channel) + "' in report");
}

double ChannelReport::linear_probability(std::string_view channel) const {
  for (const auto& c : channels)
    if (c.channel == channel) return c.linear_probability;
  throw std::out_of_range("no channel '" + std::string(channel) + "' in report");
}

double ChannelReport::part_norm(std::string_view channel, std::string_view part) const {
  for (const auto& n : nonlinear_norms)
    if (n.channel == channel && n.part == part) return n.norm;
  throw std::out_of_range("no part '" + std::string(part) + "' in channel '" + std::string(channel) + "'");
}

ChannelReport channel_probabilities(const ChannelSet& set, double tolerance) {
  ChannelReport r;
  r.geometry = set.geometry;
  r.tolerance = tolerance;
  for (const auto& w : set.channels) {
    ChannelProbability cp;
    cp.channel = to_string(w.channel());
    cp.outcome = w.outcome();
    cp.probability = w.probability();
    cp.linear_probability = w.linear_probability();
    r.total += cp.probability;
    r.linear_total += cp.linear_probability;
    r.channels.push_back(cp);
    for (const auto& part : w.parts()) {
      if (part.kind == PartKind::linear) continue;
      r.nonlinear_norms.push_back({cp.channel, part.name, std::sqrt(w.norm_squared(part_named(part.name)))});
    }
  }
  r.conservation_residual = std::abs(r.total - 1.0);
  r.consistent = r.conservation_residual <= 10.0 * tolerance;
  if (!r.consistent) {
    std::ostringstream os;
    os << "inconsistent normalization: probabilities sum to " << r.total << " (residual "
       << r.conservation_residual << " > " << 10.0 * tolerance << ")";
    r.diagnostics.push_back(os.str());
  }
  return r;
}

}  // namespace wgscat
