#pragma once

#include <span>
#include <vector>

#include "wgscat/grid.hpp"
#include "wgscat/pulse.hpp"

namespace wgscat {

// Complex amplitude on a uniform grid of shifted frequencies centred on 0.
// Convention: f(t) = (2 pi)^(-1/2) \int f~(w) exp(-i w t) dw.
struct SpectralAmplitude {
  double omega_start = 0.0;
  double d_omega = 0.0;
  std::vector<cplx> values;

  std::size_t size() const { return values.size(); }
  double omega(std::size_t k) const { return omega_start + static_cast<double>(k) * d_omega; }
  std::vector<double> omegas() const;
  // Riemann sum of |f~|^2 d_omega, the discrete counterpart of sample_norm_squared.
  double norm_squared() const;
};

// Discrete unitary transform of grid samples; the frequency grid has step
// 2 pi / (n dt) and n points starting at -(n/2) d_omega.
SpectralAmplitude to_spectrum(const TimeGrid& grid, std::span<const cplx> samples);
SpectralAmplitude to_spectrum(const PulseEnvelope& pulse);

// Same transform for explicit sample times; rejects non-uniform spacing.
SpectralAmplitude to_spectrum(std::span<const double> times, std::span<const cplx> samples);

// Inverse of to_spectrum back onto the grid it came from.
std::vector<cplx> from_spectrum(const SpectralAmplitude& spectrum, const TimeGrid& grid);

// Riemann sum of |f|^2 dt over the samples.
double sample_norm_squared(const TimeGrid& grid, std::span<const cplx> samples);

}  // namespace wgscat
