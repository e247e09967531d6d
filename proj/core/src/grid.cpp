#include "wgscat/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wgscat {

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t n)
    : t_start_(t_start), t_end_(t_end), n_(n), dt_(0.0) {
  if (n < 2) throw std::invalid_argument("time grid needs at least two samples");
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start)) {
    throw std::invalid_argument("time grid needs finite t_start < t_end");
  }
  dt_ = (t_end - t_start) / static_cast<double>(n - 1);
}

std::optional<std::size_t> TimeGrid::node_at(double t) const {
  const double x = (t - t_start_) / dt_;
  const double k = std::round(x);
  if (k < 0.0 || k > static_cast<double>(n_ - 1)) return std::nullopt;
  if (std::abs(x - k) > 1e-9) return std::nullopt;
  return static_cast<std::size_t>(k);
}

TimeGrid aligned_grid(double T, double trailing, std::size_t n) {
  if (!(T > 0.0)) throw std::invalid_argument("pulse duration must be positive");
  if (n < 8) throw std::invalid_argument("aligned grid needs at least 8 samples");
  const double span = 3.0 * T + trailing;
  const double dt_min = span / static_cast<double>(n - 1);
  // An even cell count keeps both pulse edges on the every-other-node subgrid.
  const double m = std::max(2.0, 2.0 * std::floor(T / dt_min * (1.0 + 1e-12) / 2.0));
  const double dt = T / m;
  const double t0 = -2.0 * m * dt;
  return TimeGrid(t0, t0 + static_cast<double>(n - 1) * dt, n);
}

TimeGrid default_grid(double T, double g2, std::size_t n) {
  const double trailing = g2 > 0.0 ? 12.0 / g2 : T;
  return aligned_grid(T, trailing, n);
}

TimeGrid symmetric_grid(double T, double g2, std::size_t n) {
  if (!(T > 0.0)) throw std::invalid_argument("pulse duration must be positive");
  const double L = 2.0 * T + (g2 > 0.0 ? 12.0 / g2 : T);
  return TimeGrid(-L, L, n);
}

TimeGrid spectral_grid(double T, double g2, std::size_t min_n) {
  if (!(T > 0.0)) throw std::invalid_argument("pulse duration must be positive");
  const double dt = T / 32.0;
  double span = 3.0 * T + (g2 > 0.0 ? 12.0 / g2 : T);
  if (g2 > 0.0) span = std::max(span, 8.0 * std::numbers::pi / g2);
  std::size_t n = 1;
  while (static_cast<double>(n - 1) * dt < span || n < min_n) n *= 2;
  const double t0 = -64.0 * dt;
  return TimeGrid(t0, t0 + static_cast<double>(n - 1) * dt, n);
}

}  // namespace wgscat
