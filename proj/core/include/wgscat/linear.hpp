#pragma once

#include <span>
#include <string>
#include <vector>

#include "wgscat/params.hpp"
#include "wgscat/pulse.hpp"
#include "wgscat/spectrum.hpp"

namespace wgscat {

enum class TransferMode { c, d, transmit, reflect };

std::string to_string(TransferMode mode);

// Output-to-input amplitude ratio w -> f~_out(w) / f~_in(w). Evaluated lazily.
class TransferFunction {
 public:
  TransferFunction(SystemParams params, TransferMode mode, bool markov);

  cplx operator()(double omega) const;
  std::vector<cplx> sample(std::span<const double> omegas) const;

  TransferMode mode() const { return mode_; }
  bool markov() const { return markov_; }
  const SystemParams& params() const { return params_; }

 private:
  SystemParams params_;
  TransferMode mode_;
  bool markov_;
};

// Standing-wave ratio -(G* + i w) / (G - i w), G the bright (c) or dark (d)
// rate evaluated at phase phi + w * delay unless markov is set.
TransferFunction standing_wave_transfer(const SystemParams& p, TransferMode mode, bool markov);

// Single standing-wave ratio for an explicit complex rate. Returns exactly 1
// when the rate has no real part (no coupling, the 0/0 limit included).
cplx standing_ratio(cplx rate, double omega);

struct TravelingTransfer {
  TransferFunction transmit;
  TransferFunction reflect;
};

// transmit = (c + d) / 2, reflect = (c - d) / 2 for a photon incident from the
// left. The reflection sign is the one produced by adding multiple
// reflections between the two emitters.
TravelingTransfer traveling_transfer(const SystemParams& p, bool markov);

struct BeamsplitterCoeffs {
  cplx r_right;  // right-travelling field reflected into a left-travelling one
  cplx r_left;   // left-travelling field reflected into a right-travelling one
  cplx t;
};

// Single non-interacting emitter at z0 (in units of the emitter separation,
// so the pair sits at -1/2 and +1/2). Rejects Delta != 0.
BeamsplitterCoeffs beamsplitter_coeffs(const SystemParams& p, double z0, double omega, bool markov = true);

struct Composition {
  cplx transmit;
  cplx reflect;
};

// Sums the multiple-reflection series between a first (left) and second
// (right) emitter in closed form.
Composition cavity_compose(const BeamsplitterCoeffs& first, const BeamsplitterCoeffs& second);

// Intensity transmission of the interacting pair in the Markov limit. Points
// where the rational form is close to 0/0 fall back to |transmit|^2.
double intensity_transmission(const SystemParams& p, double omega);

struct OperatingPoints {
  std::vector<double> unit_transmission;  // roots of Delta + delta cos(phi) + g2 sin(phi)
  std::vector<double> high_reflection;    // roots of Delta^2 + 2 Delta g2 sin(phi) - delta^2
  bool degenerate = false;
  std::vector<std::string> diagnostics;
};

// Roots in [0, 2 pi) by a 720-point scan followed by bisection to 1e-12.
OperatingPoints find_operating_points(double g2, double delta, double Delta);

struct PulseTransmission {
  double value = 1.0;
  std::vector<std::string> warnings;
};

// Fraction of a pulse transmitted, by spectral quadrature of |t(w) f~(w)|^2.
PulseTransmission pulse_transmission(const SystemParams& p, const PulseEnvelope& pulse, bool markov = true);
PulseTransmission pulse_transmission(const SystemParams& p, const SpectralAmplitude& spectrum, bool markov = true);

}  // namespace wgscat
