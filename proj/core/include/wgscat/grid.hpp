#pragma once

#include <cstddef>
#include <optional>

namespace wgscat {

// Uniform time grid, n >= 2 samples from t_start to t_end inclusive.
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, std::size_t n);

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  std::size_t size() const { return n_; }
  double dt() const { return dt_; }
  double operator[](std::size_t i) const { return t_start_ + static_cast<double>(i) * dt_; }

  // Index of the node sitting on t (within 1e-9 dt), if any.
  std::optional<std::size_t> node_at(double t) const;

  bool operator==(const TimeGrid& other) const = default;

 private:
  double t_start_;
  double t_end_;
  std::size_t n_;
  double dt_;
};

// Grid with t = 0 and t = T on nodes, starting at -2T and reaching at least
// T + trailing. The spacing is T / m for the largest even m that still
// fits the span into n samples.
TimeGrid aligned_grid(double T, double trailing, std::size_t n);

// Default two-photon grid: n samples covering [-2T, T + 12/g2].
TimeGrid default_grid(double T, double g2, std::size_t n = 2048);

// Symmetric grid [-L, L] with L = 2T + 12/g2, used for Gaussian pulses.
TimeGrid symmetric_grid(double T, double g2, std::size_t n = 2048);

// Grid for spectral work: spacing at most T/32 and a span long enough that
// the frequency step resolves features of width g2 (step <= g2/4).
// The sample count is the next power of two, never below min_n.
TimeGrid spectral_grid(double T, double g2, std::size_t min_n = 2048);

}  // namespace wgscat
