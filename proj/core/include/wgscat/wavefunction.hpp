#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wgscat/kernels.hpp"

namespace wgscat {

enum class Channel { cc, dd, aa, bb, ab };
enum class PartKind { linear, pair, doubly, mixed };

std::string to_string(Channel channel);
std::string to_string(PartKind kind);

// Coefficients over the one-time factors (f, G+, G-).
using FactorCoeffs = std::array<cplx, 3>;

// Two-time amplitude on the half plane late >= early:
//
//   sum_ab product[a][b] B_a(late) B_b(early)
// + sum_k exp(-Gamma_k (late - early)) N_k(early)
//
// with B = (f, G+, G-), k over the bright/dark rates and
// N_k = pair[k] . (G+^2, G+ G-, G-^2) + doubly[k] . (E+, E-).
struct OrderedForm {
  std::array<FactorCoeffs, 3> product{};
  std::array<std::array<cplx, 3>, 2> pair{};
  std::array<std::array<cplx, 2>, 2> doubly{};

  static OrderedForm outer(const FactorCoeffs& late, const FactorCoeffs& early, cplx scale = 1.0);

  OrderedForm& operator+=(const OrderedForm& other);
  OrderedForm& operator*=(cplx s);
  bool is_zero() const;
  bool operator==(const OrderedForm& other) const = default;
};

struct WavefunctionPart {
  std::string name;
  PartKind kind = PartKind::linear;
  OrderedForm upper;  // t1 > t2, late time t1
  OrderedForm lower;  // t1 < t2, late time t2

  static WavefunctionPart symmetric(std::string name, PartKind kind, const OrderedForm& form);
  bool is_symmetric() const { return upper == lower; }
};

using PartFilter = std::function<bool(const WavefunctionPart&)>;
PartFilter all_parts();
PartFilter linear_parts();
PartFilter nonlinear_parts();
PartFilter part_named(std::string name);

// Dense samples of a wavefunction, row index t1, column index t2.
struct DenseMatrix {
  std::vector<double> times;
  std::vector<cplx> data;
  std::size_t size() const { return times.size(); }
  cplx operator()(std::size_t i1, std::size_t i2) const { return data[i1 * times.size() + i2]; }
  cplx& operator()(std::size_t i1, std::size_t i2) { return data[i1 * times.size() + i2]; }
};

// Full-plane integral of |form|^2 over the half plane late > early, from the
// grid start to infinity. Inside the grid a cell-wise trapezoid with one-sided
// pulse limits is used (diagonal cells by the three-vertex rule); beyond the
// last node every factor is a known exponential and the remainder is added in
// closed form. Throws PreconditionError if a non-decaying term survives.
double half_plane_norm(const OrderedForm& form, const ExcitationKernels& kernels);

cplx evaluate(const OrderedForm& form, const ExcitationKernels& kernels, std::size_t late, Side late_side,
              std::size_t early, Side early_side);

// Output two-photon amplitude of one channel. Holds its parts lazily and a
// probability weight that converts the squared norm into a probability.
class TwoPhotonWavefunction {
 public:
  TwoPhotonWavefunction(Channel channel, std::string outcome, double weight,
                        std::shared_ptr<const ExcitationKernels> kernels, std::vector<WavefunctionPart> parts);

  Channel channel() const { return channel_; }
  const std::string& outcome() const { return outcome_; }
  double weight() const { return weight_; }
  const ExcitationKernels& kernels() const { return *kernels_; }
  const std::vector<WavefunctionPart>& parts() const { return parts_; }
  const WavefunctionPart& part(std::string_view name) const;
  bool has_part(std::string_view name) const;

  cplx operator()(std::size_t i1, std::size_t i2, Side side = Side::mid) const;
  cplx value(std::size_t i1, std::size_t i2, const PartFilter& filter, Side side = Side::mid) const;

  // Full-plane integral of |selected parts|^2 (weight not applied).
  double norm_squared(const PartFilter& filter) const;
  double probability() const { return weight_ * norm_squared(all_parts()); }
  double linear_probability() const { return weight_ * norm_squared(linear_parts()); }

  // Samples every stride-th node in both times.
  DenseMatrix materialize(std::size_t stride, const PartFilter& filter, Side side = Side::mid) const;
  DenseMatrix materialize(std::size_t stride = 1) const { return materialize(stride, all_parts()); }

  // Largest |selected parts| over all grid nodes.
  double max_abs(const PartFilter& filter) const;

 private:
  std::pair<OrderedForm, OrderedForm> combined(const PartFilter& filter) const;

  Channel channel_;
  std::string outcome_;
  double weight_;
  std::shared_ptr<const ExcitationKernels> kernels_;
  std::vector<WavefunctionPart> parts_;
};

}  // namespace wgscat
