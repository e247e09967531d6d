#pragma once

#include <span>
#include <vector>

#include "wgscat/params.hpp"
#include "wgscat/pulse.hpp"

namespace wgscat {

enum class Branch { plus, minus };

// G(t)  = int_{-inf}^t exp(-Gamma_branch (t - s)) f(s) ds
// E(t)  = int_{-inf}^t exp(-Gamma_ee (t - s)) f(s) G_branch(s) ds
// on the pulse grid, together with the pulse they were built from.
struct ExcitationKernels {
  SystemParams params;
  DecayRates rates;
  PulseEnvelope pulse;
  std::vector<cplx> G_plus;
  std::vector<cplx> G_minus;
  std::vector<cplx> E_plus;
  std::vector<cplx> E_minus;

  const TimeGrid& grid() const { return pulse.grid(); }
  std::span<const cplx> G(Branch b) const { return b == Branch::plus ? G_plus : G_minus; }
  std::span<const cplx> E(Branch b) const { return b == Branch::plus ? E_plus : E_minus; }
  cplx rate(Branch b) const { return b == Branch::plus ? rates.Gamma_plus : rates.Gamma_minus; }
};

// One pass of y(t_{i+1}) = exp(-rate dt) y(t_i) + int over the cell, exact
// when the integrand is linear across the cell between right_limits[i] and
// left_limits[i + 1].
std::vector<cplx> exponential_convolution(cplx rate, double dt, std::span<const cplx> left_limits,
                                          std::span<const cplx> right_limits);

// Rejects dt |Gamma| > 0.5 for any of the three rates and a trailing margin
// below 10 / g2.
ExcitationKernels excitation_kernels(const SystemParams& p, const PulseEnvelope& pulse);

// Long-pulse approximation f^2 / (Gamma_ee Gamma_branch) on the grid.
// Throws PreconditionError when a denominator factor vanishes.
std::vector<cplx> adiabatic_E(const SystemParams& p, const PulseEnvelope& pulse, Branch branch = Branch::plus);

// Doubly excited amplitude for a c-type (plus) or d-type (minus) pair input:
// psi_e(t) = -exp(-i (2 delta + beta) t) 2 sqrt(2) Gamma_{c|s} E_branch(t).
std::vector<cplx> double_excitation_amplitude(const ExcitationKernels& k, Branch branch = Branch::plus);
std::vector<cplx> double_excitation_amplitude(const SystemParams& p, const PulseEnvelope& pulse,
                                              Branch branch = Branch::plus);

}  // namespace wgscat
