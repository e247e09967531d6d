#include "wgscat/pulse.hpp"

#include <cmath>
#include <sstream>

namespace wgscat {

std::string to_string(PulseShape shape) {
  switch (shape) {
    case PulseShape::square: return "square";
    case PulseShape::gaussian: return "gaussian";
    case PulseShape::custom: return "custom";
  }
  return "custom";
}

PulseShape parse_pulse_shape(const std::string& name) {
  if (name == "square") return PulseShape::square;
  if (name == "gaussian") return PulseShape::gaussian;
  if (name == "custom") return PulseShape::custom;
  throw std::invalid_argument("unknown pulse shape '" + name + "'");
}

PulseEnvelope::PulseEnvelope(TimeGrid grid, PulseShape shape, double duration, std::vector<cplx> left,
                             std::vector<cplx> right, double support_begin, double support_end)
    : grid_(grid),
      shape_(shape),
      duration_(duration),
      left_(std::move(left)),
      right_(std::move(right)),
      support_begin_(support_begin),
      support_end_(support_end) {
  if (left_.size() != grid_.size() || right_.size() != grid_.size()) {
    throw std::invalid_argument("pulse samples do not match the grid size");
  }
  values_.resize(grid_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] = 0.5 * (left_[i] + right_[i]);
}

cplx PulseEnvelope::at(std::size_t i, Side side) const {
  switch (side) {
    case Side::left: return left_[i];
    case Side::right: return right_[i];
    case Side::mid: return values_[i];
  }
  return values_[i];
}

namespace {

double trapezoid_norm(std::span<const cplx> left, std::span<const cplx> right, double dt) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < left.size(); ++i) {
    sum += std::norm(right[i]) + std::norm(left[i + 1]);
  }
  return 0.5 * dt * sum;
}

std::size_t require_node(const TimeGrid& grid, double t, const char* what) {
  auto k = grid.node_at(t);
  if (!k) {
    std::ostringstream os;
    os << "grid does not place a node on the pulse " << what << " (t = " << t
       << "); use a grid whose spacing divides T and contains t = 0";
    throw PreconditionError(os.str());
  }
  return *k;
}

}  // namespace

double PulseEnvelope::norm_squared() const { return trapezoid_norm(left_, right_, grid_.dt()); }

PulseEnvelope make_pulse(PulseShape shape, double T, const TimeGrid& grid) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("pulse duration must be positive");
  const std::size_t n = grid.size();
  std::vector<cplx> left(n), right(n);

  if (shape == PulseShape::square) {
    const std::size_t i0 = require_node(grid, 0.0, "leading edge");
    const std::size_t i1 = require_node(grid, T, "trailing edge");
    if (i1 <= i0) throw PreconditionError("pulse shorter than one grid cell");
    if (i0 == 0 || i1 == n - 1) {
      throw PreconditionError("grid too short: square pulse must end strictly inside the grid");
    }
    const double h = 1.0 / std::sqrt(T);
    for (std::size_t i = i0; i <= i1; ++i) {
      left[i] = (i == i0) ? 0.0 : h;
      right[i] = (i == i1) ? 0.0 : h;
    }
    return PulseEnvelope(grid, shape, T, std::move(left), std::move(right), 0.0, T);
  }

  if (shape == PulseShape::gaussian) {
    const double c = 0.5 * (grid.t_start() + grid.t_end());
    const double reach = 1.5 * T;
    if (c - reach < grid.t_start() || c + reach > grid.t_end()) {
      std::ostringstream os;
      os << "grid too short: gaussian of duration " << T << " needs at least [" << c - reach << ", "
         << c + reach << "]";
      throw PreconditionError(os.str());
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double x = (grid[i] - c) / T;
      left[i] = right[i] = std::exp(-4.0 * x * x);
    }
    const double scale = 1.0 / std::sqrt(trapezoid_norm(left, right, grid.dt()));
    for (std::size_t i = 0; i < n; ++i) left[i] = right[i] = left[i] * scale;
    return PulseEnvelope(grid, shape, T, std::move(left), std::move(right), c - reach, c + reach);
  }

  throw std::invalid_argument("make_pulse: use make_custom_pulse for custom envelopes");
}

PulseEnvelope make_custom_pulse(const TimeGrid& grid, std::vector<cplx> samples) {
  if (samples.size() != grid.size()) throw std::invalid_argument("custom pulse size mismatch");
  const double nrm = trapezoid_norm(samples, samples, grid.dt());
  if (!(nrm > 0.0)) throw std::invalid_argument("custom pulse has zero norm");
  const double scale = 1.0 / std::sqrt(nrm);
  std::size_t first = samples.size(), last = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] *= scale;
    if (samples[i] != cplx{}) {
      first = std::min(first, i);
      last = i;
    }
  }
  const double duration = grid[last] - grid[first];
  return PulseEnvelope(grid, PulseShape::custom, duration, samples, samples, grid[first], grid[last]);
}

void require_trailing_margin(const PulseEnvelope& pulse, double g2, double margin_rates) {
  if (g2 <= 0.0) return;
  const double margin = pulse.grid().t_end() - pulse.support_end();
  if (margin < margin_rates / g2 * (1.0 - 1e-9)) {
    std::ostringstream os;
    os << "grid too short: trailing margin " << margin << " is below " << margin_rates
       << "/g2 = " << margin_rates / g2;
    throw PreconditionError(os.str());
  }
}

}  // namespace wgscat
