#include "wgscat/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace wgscat {

namespace {

// (1 - e^{-z}) / z and (1 - (1 + z) e^{-z}) / z^2, with series near z = 0.
void cell_weights(cplx z, cplx& w0, cplx& w1) {
  if (std::abs(z) < 1e-2) {
    w0 = 1.0 + z * (-1.0 / 2 + z * (1.0 / 6 + z * (-1.0 / 24 + z * (1.0 / 120 + z * (-1.0 / 720)))));
    w1 = 0.5 + z * (-1.0 / 3 + z * (1.0 / 8 + z * (-1.0 / 30 + z * (1.0 / 144 + z * (-1.0 / 840)))));
    return;
  }
  const cplx e = std::exp(-z);
  w0 = (1.0 - e) / z;
  w1 = (1.0 - (1.0 + z) * e) / (z * z);
}

void check_resolution(cplx rate, double dt, const char* name) {
  if (dt * std::abs(rate) > 0.5) {
    std::ostringstream os;
    os << "kernel under-resolved: dt |" << name << "| = " << dt * std::abs(rate) << " > 0.5; refine the grid";
    throw PreconditionError(os.str());
  }
}

}  // namespace

std::vector<cplx> exponential_convolution(cplx rate, double dt, std::span<const cplx> left_limits,
                                          std::span<const cplx> right_limits) {
  const std::size_t n = left_limits.size();
  if (right_limits.size() != n) throw std::invalid_argument("exponential_convolution: size mismatch");
  const cplx z = rate * dt;
  const cplx decay = std::exp(-z);
  cplx w0, w1;
  cell_weights(z, w0, w1);
  // Linear integrand a (1 - s/h) + b s/h over a cell of width h.
  const cplx wa = dt * w1;
  const cplx wb = dt * (w0 - w1);
  std::vector<cplx> y(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    y[i + 1] = decay * y[i] + wa * right_limits[i] + wb * left_limits[i + 1];
  }
  return y;
}

ExcitationKernels excitation_kernels(const SystemParams& p, const PulseEnvelope& pulse) {
  p.validate();
  const DecayRates r = rates(p);
  const double dt = pulse.grid().dt();
  check_resolution(r.Gamma_plus, dt, "Gamma_plus");
  check_resolution(r.Gamma_minus, dt, "Gamma_minus");
  check_resolution(r.Gamma_ee, dt, "Gamma_ee");
  require_trailing_margin(pulse, p.g2);

  ExcitationKernels k{p, r, pulse, {}, {}, {}, {}};
  k.G_plus = exponential_convolution(r.Gamma_plus, dt, pulse.left(), pulse.right());
  k.G_minus = exponential_convolution(r.Gamma_minus, dt, pulse.left(), pulse.right());

  const std::size_t n = pulse.grid().size();
  std::vector<cplx> lo(n), hi(n);
  for (Branch b : {Branch::plus, Branch::minus}) {
    const auto G = k.G(b);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = pulse.left()[i] * G[i];
      hi[i] = pulse.right()[i] * G[i];
    }
    auto E = exponential_convolution(r.Gamma_ee, dt, lo, hi);
    (b == Branch::plus ? k.E_plus : k.E_minus) = std::move(E);
  }
  return k;
}

std::vector<cplx> adiabatic_E(const SystemParams& p, const PulseEnvelope& pulse, Branch branch) {
  p.validate();
  const DecayRates r = rates(p);
  const cplx single = branch == Branch::plus ? r.Gamma_plus : r.Gamma_minus;
  const cplx den = r.Gamma_ee * single;
  const double scale = std::max(p.g2 * p.g2, 1e-300);
  if (std::abs(r.Gamma_ee) == 0.0 || std::abs(single) == 0.0 || std::abs(den) < 1e-14 * scale) {
    throw PreconditionError("two-photon resonance singularity: adiabatic denominator vanishes");
  }
  const auto f = pulse.values();
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] * f[i] / den;
  return out;
}

std::vector<cplx> double_excitation_amplitude(const ExcitationKernels& k, Branch branch) {
  const auto& p = k.params;
  const double weight = branch == Branch::plus ? k.rates.gamma_c : k.rates.gamma_s;
  const auto E = k.E(branch);
  const TimeGrid& grid = k.grid();
  std::vector<cplx> out(E.size());
  const double prefactor = -2.0 * std::numbers::sqrt2 * weight;
  for (std::size_t i = 0; i < E.size(); ++i) {
    const double ph = -(2.0 * p.delta + p.beta) * grid[i];
    out[i] = prefactor * cplx(std::cos(ph), std::sin(ph)) * E[i];
  }
  return out;
}

std::vector<cplx> double_excitation_amplitude(const SystemParams& p, const PulseEnvelope& pulse, Branch branch) {
  return double_excitation_amplitude(excitation_kernels(p, pulse), branch);
}

}  // namespace wgscat
