#pragma once

#include <span>
#include <string>
#include <vector>

#include "wgscat/grid.hpp"
#include "wgscat/params.hpp"

namespace wgscat {

enum class PulseShape { square, gaussian, custom };

std::string to_string(PulseShape shape);
PulseShape parse_pulse_shape(const std::string& name);

// One-sided limit selector for envelopes with jumps on grid nodes.
enum class Side { left, mid, right };

// Normalized slowly-varying envelope sampled on a uniform grid.
//
// values() holds the midpoint convention at jumps (average of the two
// one-sided limits); left() and right() hold the limits themselves so that
// cell-wise quadrature never straddles a discontinuity.
class PulseEnvelope {
 public:
  PulseEnvelope(TimeGrid grid, PulseShape shape, double duration, std::vector<cplx> left,
                std::vector<cplx> right, double support_begin, double support_end);

  const TimeGrid& grid() const { return grid_; }
  PulseShape shape() const { return shape_; }
  double duration() const { return duration_; }
  double support_begin() const { return support_begin_; }
  double support_end() const { return support_end_; }

  std::span<const cplx> values() const { return values_; }
  std::span<const cplx> left() const { return left_; }
  std::span<const cplx> right() const { return right_; }
  cplx at(std::size_t i, Side side) const;
  bool is_jump(std::size_t i) const { return left_[i] != right_[i]; }

  // Cell-wise trapezoid of |f|^2 using one-sided limits.
  double norm_squared() const;

 private:
  TimeGrid grid_;
  PulseShape shape_;
  double duration_;
  std::vector<cplx> left_;
  std::vector<cplx> right_;
  std::vector<cplx> values_;
  double support_begin_;
  double support_end_;
};

// Square pulse: 1/sqrt(T) on [0, T], both edges on grid nodes.
// Gaussian: proportional to exp(-4 (t - c)^2 / T^2) with c the grid midpoint.
// Throws PreconditionError if the grid does not hold the support.
PulseEnvelope make_pulse(PulseShape shape, double T, const TimeGrid& grid);

// Arbitrary samples, rescaled to unit norm. Treated as continuous.
PulseEnvelope make_custom_pulse(const TimeGrid& grid, std::vector<cplx> samples);

// Rejects grids whose trailing margin after the support is below
// margin_rates / g2.
void require_trailing_margin(const PulseEnvelope& pulse, double g2, double margin_rates = 10.0);

}  // namespace wgscat
