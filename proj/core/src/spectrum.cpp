#include "wgscat/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace wgscat {

namespace {

// The FFTW planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// In-place DFT with exp(sign * 2 pi i jk / n).
void dft_in_place(std::vector<cplx>& data, int sign) {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr, sign, FFTW_ESTIMATE));
  }
  if (!plan) throw std::runtime_error("FFTW could not create a plan");
  fftw_execute(plan.get());
}

cplx unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

std::vector<double> SpectralAmplitude::omegas() const {
  std::vector<double> w(values.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = omega(k);
  return w;
}

double SpectralAmplitude::norm_squared() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s * d_omega;
}

double sample_norm_squared(const TimeGrid& grid, std::span<const cplx> samples) {
  double s = 0.0;
  for (const auto& v : samples) s += std::norm(v);
  return s * grid.dt();
}

// f~(w_k) = dt / sqrt(2 pi) sum_j f_j exp(i w_k t_j), w_k = (k - m) dw with
// m = n / 2. Writing t_j = t0 + j dt splits the phase into a plain DFT kernel
// times exp(-2 pi i m j / n) on the input and exp(i w_k t0) on the output.
SpectralAmplitude to_spectrum(const TimeGrid& grid, std::span<const cplx> samples) {
  const std::size_t n = grid.size();
  if (samples.size() != n) throw std::invalid_argument("to_spectrum: sample count mismatch");
  const double dt = grid.dt();
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  const std::size_t m = n / 2;

  std::vector<cplx> work(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = -2.0 * std::numbers::pi * static_cast<double>((m * j) % n) / static_cast<double>(n);
    work[j] = samples[j] * unit_phase(a);
  }
  dft_in_place(work, FFTW_BACKWARD);

  SpectralAmplitude out;
  out.omega_start = -static_cast<double>(m) * dw;
  out.d_omega = dw;
  out.values.resize(n);
  const double scale = dt / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = scale * work[k] * unit_phase(out.omega(k) * grid.t_start());
  }
  return out;
}

SpectralAmplitude to_spectrum(const PulseEnvelope& pulse) { return to_spectrum(pulse.grid(), pulse.values()); }

SpectralAmplitude to_spectrum(std::span<const double> times, std::span<const cplx> samples) {
  if (times.size() < 2 || times.size() != samples.size()) {
    throw std::invalid_argument("to_spectrum: need matching times and samples (>= 2)");
  }
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(times[i] - times[i - 1] - dt) > 1e-9 * std::abs(dt)) {
      throw std::invalid_argument("to_spectrum: sample times are not uniformly spaced");
    }
  }
  return to_spectrum(TimeGrid(times.front(), times.back(), times.size()), samples);
}

std::vector<cplx> from_spectrum(const SpectralAmplitude& spectrum, const TimeGrid& grid) {
  const std::size_t n = grid.size();
  if (spectrum.size() != n) throw std::invalid_argument("from_spectrum: size mismatch");
  const std::size_t m = n / 2;
  std::vector<cplx> work(n);
  const double scale = std::sqrt(2.0 * std::numbers::pi) / (grid.dt() * static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    work[k] = spectrum.values[k] * unit_phase(-spectrum.omega(k) * grid.t_start());
  }
  dft_in_place(work, FFTW_FORWARD);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>((m * j) % n) / static_cast<double>(n);
    work[j] *= scale * unit_phase(a);
  }
  return work;
}

}  // namespace wgscat
