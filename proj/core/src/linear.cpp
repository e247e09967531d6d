#include "wgscat/linear.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

namespace wgscat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

}  // namespace

std::string to_string(TransferMode mode) {
  switch (mode) {
    case TransferMode::c: return "c";
    case TransferMode::d: return "d";
    case TransferMode::transmit: return "transmit";
    case TransferMode::reflect: return "reflect";
  }
  return "?";
}

cplx standing_ratio(cplx rate, double omega) {
  if (rate.real() == 0.0) return 1.0;
  return -(std::conj(rate) + kI * omega) / (rate - kI * omega);
}

TransferFunction::TransferFunction(SystemParams params, TransferMode mode, bool markov)
    : params_(params), mode_(mode), markov_(markov) {
  params_.validate();
}

cplx TransferFunction::operator()(double omega) const {
  const DecayRates r = rates_at(params_, omega, markov_);
  switch (mode_) {
    case TransferMode::c: return standing_ratio(r.Gamma_plus, omega);
    case TransferMode::d: return standing_ratio(r.Gamma_minus, omega);
    case TransferMode::transmit:
      return 0.5 * (standing_ratio(r.Gamma_plus, omega) + standing_ratio(r.Gamma_minus, omega));
    case TransferMode::reflect:
      return 0.5 * (standing_ratio(r.Gamma_plus, omega) - standing_ratio(r.Gamma_minus, omega));
  }
  return 1.0;
}

std::vector<cplx> TransferFunction::sample(std::span<const double> omegas) const {
  std::vector<cplx> out(omegas.size());
  std::transform(omegas.begin(), omegas.end(), out.begin(), [this](double w) { return (*this)(w); });
  return out;
}

TransferFunction standing_wave_transfer(const SystemParams& p, TransferMode mode, bool markov) {
  if (mode != TransferMode::c && mode != TransferMode::d) {
    throw std::invalid_argument("standing-wave transfer takes mode c or d");
  }
  return TransferFunction(p, mode, markov);
}

TravelingTransfer traveling_transfer(const SystemParams& p, bool markov) {
  return {TransferFunction(p, TransferMode::transmit, markov), TransferFunction(p, TransferMode::reflect, markov)};
}

BeamsplitterCoeffs beamsplitter_coeffs(const SystemParams& p, double z0, double omega, bool markov) {
  p.validate();
  if (p.Delta != 0.0) {
    throw std::invalid_argument("beamsplitter picture only holds for non-interacting emitters (Delta = 0)");
  }
  const double phase = markov ? p.phi : p.phi + omega * p.delay;
  const cplx den = p.g2 - kI * (omega + p.delta);
  BeamsplitterCoeffs b;
  if (den == cplx{}) {
    // g2 = 0 on resonance: no scatterer at all.
    b.r_right = b.r_left = 0.0;
    b.t = 1.0;
    return b;
  }
  b.r_right = -p.g2 * std::exp(kI * (2.0 * z0 * phase)) / den;
  b.r_left = -p.g2 * std::exp(-kI * (2.0 * z0 * phase)) / den;
  b.t = -kI * (omega + p.delta) / den;
  return b;
}

Composition cavity_compose(const BeamsplitterCoeffs& first, const BeamsplitterCoeffs& second) {
  // A round trip inside the pair picks up second.r_right then first.r_left.
  const cplx round_trip = second.r_right * first.r_left;
  const cplx den = 1.0 - round_trip;
  if (den == cplx{}) throw PreconditionError("cavity composition is singular at this frequency");
  Composition out;
  out.transmit = first.t * second.t / den;
  out.reflect = first.r_right + first.t * second.t * second.r_right / den;
  return out;
}

double intensity_transmission(const SystemParams& p, double omega) {
  p.validate();
  const double x = omega + p.delta;
  const double s = std::sin(p.phi);
  const double c = std::cos(p.phi);
  const double a = 2.0 * p.g2 * (p.Delta + x * c + p.g2 * s);
  const double b = x * x - p.Delta * p.Delta - 2.0 * p.Delta * p.g2 * s;
  const double scale = std::max({p.g2, std::abs(x), std::abs(p.Delta), 1e-300});
  if (std::hypot(a, b) < 1e-3 * scale * scale) {
    return std::norm(TransferFunction(p, TransferMode::transmit, true)(omega));
  }
  return b * b / (b * b + a * a);
}

namespace {

using Fn = std::function<double(double)>;

std::vector<double> scan_roots(const Fn& f, const Fn& df, double scale) {
  constexpr int kScan = 720;
  const double step = kTwoPi / kScan;
  const double zero_tol = 1e-12 * scale;
  std::vector<double> roots;
  auto tol = [](double lo, double hi) { return std::abs(hi - lo) < 1e-12; };
  auto add = [&](double r) {
    r = std::fmod(r, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    for (double q : roots) {
      const double d = std::abs(q - r);
      if (std::min(d, kTwoPi - d) < 1e-9) return;
    }
    roots.push_back(r);
  };
  for (int k = 0; k < kScan; ++k) {
    const double lo = k * step;
    const double hi = (k + 1) * step;
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) {
      add(lo);
      continue;
    }
    if (flo * fhi < 0.0) {
      auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol);
      add(0.5 * (a + b));
      continue;
    }
    // Tangential (double) roots do not change sign; look for a stationary
    // point of f inside the cell where f itself vanishes.
    const double dlo = df(lo);
    const double dhi = df(hi);
    if (dlo * dhi < 0.0) {
      auto [a, b] = boost::math::tools::bisect(df, lo, hi, tol);
      const double m = 0.5 * (a + b);
      if (std::abs(f(m)) <= zero_tol) add(m);
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

OperatingPoints find_operating_points(double g2, double delta, double Delta) {
  OperatingPoints out;
  const double scale = std::max({std::abs(g2), std::abs(delta), std::abs(Delta), 1e-300});
  if (Delta == 0.0 && delta == 0.0) {
    out.degenerate = true;
    out.diagnostics.push_back(
        "Delta = delta = 0: the unit-transmission condition reduces to sin(phi) = 0, where the "
        "transmission at w = 0 is 0/0; no operating point is reported");
  } else {
    out.unit_transmission = scan_roots(
        [&](double ph) { return Delta + delta * std::cos(ph) + g2 * std::sin(ph); },
        [&](double ph) { return -delta * std::sin(ph) + g2 * std::cos(ph); }, scale);
    if (out.unit_transmission.empty()) {
      out.diagnostics.push_back("no real phase satisfies the unit-transmission condition");
    }
  }
  if (Delta == 0.0) {
    if (delta == 0.0) {
      out.degenerate = true;
      out.diagnostics.push_back("Delta = delta = 0: the high-reflection condition holds for every phase");
    } else {
      out.diagnostics.push_back("Delta = 0 and delta != 0: the high-reflection condition has no root");
    }
  } else {
    out.high_reflection = scan_roots(
        [&](double ph) { return Delta * Delta + 2.0 * Delta * g2 * std::sin(ph) - delta * delta; },
        [&](double ph) { return 2.0 * Delta * g2 * std::cos(ph); }, scale * scale);
    if (out.high_reflection.empty()) {
      out.diagnostics.push_back("no real phase satisfies the high-reflection condition");
    }
  }
  return out;
}

namespace {

// Loss is accumulated rather than the transmitted part: |t| -> 1 far from
// resonance, so energy outside the sampled band only enters through the norm.
PulseTransmission transmitted_fraction(const SystemParams& p, const SpectralAmplitude& spectrum, bool markov,
                                       std::optional<double> energy) {
  p.validate();
  PulseTransmission out;
  const TransferFunction t(p, TransferMode::transmit, markov);
  double loss = 0.0, band = 0.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double w2 = std::norm(spectrum.values[k]);
    if (w2 == 0.0) continue;
    band += w2;
    loss += w2 * (1.0 - std::norm(t(spectrum.omega(k))));
  }
  if (!(band > 0.0)) throw std::invalid_argument("pulse_transmission: empty spectrum");
  const double total = energy ? *energy / spectrum.d_omega : band;
  out.value = 1.0 - loss / total;
  if (p.g2 > 0.0 && spectrum.d_omega > 0.25 * p.g2) {
    std::ostringstream os;
    os << "frequency step " << spectrum.d_omega << " does not resolve features of width g2 = " << p.g2
       << "; lengthen the time grid";
    out.warnings.push_back(os.str());
  }
  if (!markov && p.delay > 0.0 && spectrum.d_omega * p.delay > 0.5) {
    out.warnings.push_back("frequency step too coarse for the delay-induced phase winding");
  }
  return out;
}

}  // namespace

PulseTransmission pulse_transmission(const SystemParams& p, const SpectralAmplitude& spectrum, bool markov) {
  return transmitted_fraction(p, spectrum, markov, std::nullopt);
}

PulseTransmission pulse_transmission(const SystemParams& p, const PulseEnvelope& pulse, bool markov) {
  return transmitted_fraction(p, to_spectrum(pulse), markov, pulse.norm_squared());
}

}  // namespace wgscat
