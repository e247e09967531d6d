#include "wgscat/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace wgscat {

std::string to_string(Channel channel) {
  switch (channel) {
    case Channel::cc: return "cc";
    case Channel::dd: return "dd";
    case Channel::aa: return "aa";
    case Channel::bb: return "bb";
    case Channel::ab: return "ab";
  }
  return "?";
}

std::string to_string(PartKind kind) {
  switch (kind) {
    case PartKind::linear: return "linear";
    case PartKind::pair: return "pair";
    case PartKind::doubly: return "doubly";
    case PartKind::mixed: return "mixed";
  }
  return "?";
}

OrderedForm OrderedForm::outer(const FactorCoeffs& late, const FactorCoeffs& early, cplx scale) {
  OrderedForm f;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) f.product[a][b] = scale * late[a] * early[b];
  return f;
}

OrderedForm& OrderedForm::operator+=(const OrderedForm& o) {
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) product[a][b] += o.product[a][b];
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t q = 0; q < 3; ++q) pair[k][q] += o.pair[k][q];
    for (std::size_t m = 0; m < 2; ++m) doubly[k][m] += o.doubly[k][m];
  }
  return *this;
}

OrderedForm& OrderedForm::operator*=(cplx s) {
  for (auto& row : product)
    for (auto& v : row) v *= s;
  for (auto& row : pair)
    for (auto& v : row) v *= s;
  for (auto& row : doubly)
    for (auto& v : row) v *= s;
  return *this;
}

bool OrderedForm::is_zero() const { return *this == OrderedForm{}; }

WavefunctionPart WavefunctionPart::symmetric(std::string name, PartKind kind, const OrderedForm& form) {
  return {std::move(name), kind, form, form};
}

PartFilter all_parts() {
  return [](const WavefunctionPart&) { return true; };
}
PartFilter linear_parts() {
  return [](const WavefunctionPart& p) { return p.kind == PartKind::linear; };
}
PartFilter nonlinear_parts() {
  return [](const WavefunctionPart& p) { return p.kind != PartKind::linear; };
}
PartFilter part_named(std::string name) {
  return [name = std::move(name)](const WavefunctionPart& p) { return p.name == name; };
}

namespace {

// Caches the early-time nonlinear factors N_k and the decay tables of one form.
class FormEvaluator {
 public:
  FormEvaluator(const OrderedForm& form, const ExcitationKernels& k) : form_(form), k_(k) {
    const std::size_t n = k.grid().size();
    const double dt = k.grid().dt();
    for (std::size_t b = 0; b < 2; ++b) {
      const auto& pr = form.pair[b];
      const auto& db = form.doubly[b];
      active_[b] = pr[0] != cplx{} || pr[1] != cplx{} || pr[2] != cplx{} || db[0] != cplx{} || db[1] != cplx{};
      if (!active_[b]) continue;
      N_[b].resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        const cplx gp = k.G_plus[j], gm = k.G_minus[j];
        N_[b][j] = pr[0] * gp * gp + pr[1] * gp * gm + pr[2] * gm * gm + db[0] * k.E_plus[j] + db[1] * k.E_minus[j];
      }
      const cplx rate = b == 0 ? k.rates.Gamma_plus : k.rates.Gamma_minus;
      decay_[b].resize(n);
      for (std::size_t m = 0; m < n; ++m) decay_[b][m] = std::exp(-rate * (dt * static_cast<double>(m)));
    }
  }

  FactorCoeffs late_row(std::size_t late, Side sx) const {
    const cplx B[3] = {k_.pulse.at(late, sx), k_.G_plus[late], k_.G_minus[late]};
    FactorCoeffs u{};
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t a = 0; a < 3; ++a) u[b] += form_.product[a][b] * B[a];
    return u;
  }

  cplx nonlinear(std::size_t late, std::size_t early) const {
    cplx v{};
    for (std::size_t b = 0; b < 2; ++b)
      if (active_[b]) v += decay_[b][late - early] * N_[b][early];
    return v;
  }

  cplx at(std::size_t late, Side sx, std::size_t early, Side sy) const {
    const FactorCoeffs u = late_row(late, sx);
    return u[0] * k_.pulse.at(early, sy) + u[1] * k_.G_plus[early] + u[2] * k_.G_minus[early] +
           nonlinear(late, early);
  }

  // |value|^2 for early = 0..jmax, with right and left limits in the early time.
  // Only nodes first, first + stride, ... are filled.
  void row(std::size_t late, Side sx, std::size_t jmax, std::vector<double>& right, std::vector<double>& left,
           std::size_t first = 0, std::size_t stride = 1) const {
    const FactorCoeffs u = late_row(late, sx);
    const auto fr = k_.pulse.right();
    const auto fl = k_.pulse.left();
    for (std::size_t j = first; j <= jmax; j += stride) {
      const cplx base = u[1] * k_.G_plus[j] + u[2] * k_.G_minus[j] + nonlinear(late, j);
      right[j] = std::norm(base + u[0] * fr[j]);
      left[j] = std::norm(base + u[0] * fl[j]);
    }
  }

  const std::vector<cplx>& N(std::size_t b) const { return N_[b]; }
  const std::vector<cplx>& decay(std::size_t b) const { return decay_[b]; }
  bool active(std::size_t b) const { return active_[b]; }

 private:
  const OrderedForm& form_;
  const ExcitationKernels& k_;
  std::array<std::vector<cplx>, 2> N_;
  std::array<std::vector<cplx>, 2> decay_;
  bool active_[2] = {false, false};
};

// Nodes of a subgrid used by the quadrature: first, first + stride, ..., last.
struct Subgrid {
  std::size_t first = 0;
  std::size_t stride = 1;
  std::size_t last = 0;
};

double grid_triangle(const FormEvaluator& ev, const Subgrid& sg, double dt) {
  const std::size_t n = sg.last + 1;
  const std::size_t s = sg.stride;
  std::vector<double> ar(n), al(n), br(n), bl(n);
  const double h = dt * static_cast<double>(s);
  const double full = h * h / 4.0;
  const double diag = h * h / 6.0;
  double sum = 0.0;
  for (std::size_t i = sg.first; i + s < n; i += s) {
    ev.row(i, Side::right, i, ar, al, sg.first, s);
    ev.row(i + s, Side::left, i + s, br, bl, sg.first, s);
    double acc = 0.0;
    for (std::size_t j = sg.first; j < i; j += s) acc += ar[j] + br[j] + al[j + s] + bl[j + s];
    sum += full * acc + diag * (ar[i] + br[i] + bl[i + s]);
  }
  return sum;
}

[[noreturn]] void non_decaying(const char* where) {
  std::ostringstream os;
  os << "two-photon amplitude has a non-decaying component (" << where
     << "); the norm is unbounded for these parameters";
  throw PreconditionError(os.str());
}

// Late time beyond the last node, early time on the grid.
double late_tail(const OrderedForm& form, const FormEvaluator& ev, const ExcitationKernels& k, const Subgrid& sg) {
  const std::size_t last = sg.last;
  const double dt = k.grid().dt() * static_cast<double>(sg.stride);
  const cplx rate[2] = {k.rates.Gamma_plus, k.rates.Gamma_minus};
  const cplx G_end[2] = {k.G_plus[last], k.G_minus[last]};

  // h_m(early) multiplies exp(-rate_m (late - t_end)).
  std::array<FactorCoeffs, 2> lin{};
  for (std::size_t m = 0; m < 2; ++m)
    for (std::size_t b = 0; b < 3; ++b) lin[m][b] = G_end[m] * form.product[1 + m][b];

  auto h = [&](std::size_t m, std::size_t j, Side sy) {
    cplx v = lin[m][0] * k.pulse.at(j, sy) + lin[m][1] * k.G_plus[j] + lin[m][2] * k.G_minus[j];
    if (ev.active(m)) v += ev.decay(m)[last - j] * ev.N(m)[j];
    return v;
  };

  bool active[2] = {false, false};
  for (std::size_t m = 0; m < 2; ++m) {
    for (std::size_t j = sg.first; j <= last && !active[m]; j += sg.stride) {
      active[m] = h(m, j, Side::left) != cplx{} || h(m, j, Side::right) != cplx{};
    }
    if (active[m] && !(rate[m].real() > 0.0)) non_decaying("late-time tail");
  }

  auto q = [&](std::size_t j, Side sy) {
    cplx hv[2] = {active[0] ? h(0, j, sy) : cplx{}, active[1] ? h(1, j, sy) : cplx{}};
    double s = 0.0;
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b)
        if (active[a] && active[b]) s += (hv[a] * std::conj(hv[b]) / (rate[a] + std::conj(rate[b]))).real();
    return s;
  };

  if (!active[0] && !active[1]) return 0.0;
  double sum = 0.0;
  for (std::size_t j = sg.first; j < last; j += sg.stride) sum += q(j, Side::right) + q(j + sg.stride, Side::left);
  return 0.5 * dt * sum;
}

// Both times beyond the last node: a finite sum of separable exponentials.
double corner_tail(const OrderedForm& form, const ExcitationKernels& k, std::size_t last) {
  struct Term {
    cplx c, a, b;
  };
  const cplx rate[2] = {k.rates.Gamma_plus, k.rates.Gamma_minus};
  const cplx G_end[2] = {k.G_plus[last], k.G_minus[last]};
  const cplx E_end[2] = {k.E_plus[last], k.E_minus[last]};
  const cplx Gee = k.rates.Gamma_ee;

  std::vector<Term> terms;
  auto push = [&](cplx c, cplx a, cplx b) {
    if (c == cplx{}) return;
    if (!(a.real() > 0.0) || !((a + b).real() > 0.0)) non_decaying("both times past the grid");
    terms.push_back({c, a, b});
  };
  for (std::size_t m = 0; m < 2; ++m)
    for (std::size_t mp = 0; mp < 2; ++mp)
      push(form.product[1 + m][1 + mp] * G_end[m] * G_end[mp], rate[m], rate[mp]);
  for (std::size_t kk = 0; kk < 2; ++kk) {
    const auto& pr = form.pair[kk];
    push(pr[0] * G_end[0] * G_end[0], rate[kk], 2.0 * rate[0] - rate[kk]);
    push(pr[1] * G_end[0] * G_end[1], rate[kk], rate[0] + rate[1] - rate[kk]);
    push(pr[2] * G_end[1] * G_end[1], rate[kk], 2.0 * rate[1] - rate[kk]);
    for (std::size_t m = 0; m < 2; ++m) push(form.doubly[kk][m] * E_end[m], rate[kk], Gee - rate[kk]);
  }
  double sum = 0.0;
  for (const auto& x : terms)
    for (const auto& y : terms) {
      const cplx s1 = x.a + std::conj(y.a);
      const cplx s2 = s1 + x.b + std::conj(y.b);
      sum += (x.c * std::conj(y.c) / (s1 * s2)).real();
    }
  return sum;
}

}  // namespace

double half_plane_norm(const OrderedForm& form, const ExcitationKernels& kernels) {
  if (form.is_zero()) return 0.0;
  const FormEvaluator ev(form, kernels);
  const std::size_t n = kernels.grid().size();
  const double dt = kernels.grid().dt();
  auto total = [&](const Subgrid& sg) {
    return grid_triangle(ev, sg, dt) + late_tail(form, ev, kernels, sg) + corner_tail(form, kernels, sg.last);
  };
  const double fine = total({0, 1, n - 1});

  // Richardson step against the subgrid of every other node. The error is a
  // series in dt^2 only when every pulse discontinuity sits on that subgrid.
  std::optional<std::size_t> parity;
  bool aligned = n >= 16;
  for (std::size_t i = 0; i < n && aligned; ++i) {
    if (!kernels.pulse.is_jump(i)) continue;
    if (!parity) parity = i % 2;
    aligned = *parity == i % 2;
  }
  if (!aligned) return fine;
  const std::size_t first = parity.value_or(0);
  const std::size_t last = n - 1 - (n - 1 - first) % 2;
  const double coarse = total({first, 2, last});
  return (4.0 * fine - coarse) / 3.0;
}

cplx evaluate(const OrderedForm& form, const ExcitationKernels& kernels, std::size_t late, Side late_side,
              std::size_t early, Side early_side) {
  if (early > late) throw std::invalid_argument("evaluate: early index after late index");
  return FormEvaluator(form, kernels).at(late, late_side, early, early_side);
}

TwoPhotonWavefunction::TwoPhotonWavefunction(Channel channel, std::string outcome, double weight,
                                             std::shared_ptr<const ExcitationKernels> kernels,
                                             std::vector<WavefunctionPart> parts)
    : channel_(channel),
      outcome_(std::move(outcome)),
      weight_(weight),
      kernels_(std::move(kernels)),
      parts_(std::move(parts)) {
  if (!kernels_) throw std::invalid_argument("wavefunction needs excitation kernels");
}

const WavefunctionPart& TwoPhotonWavefunction::part(std::string_view name) const {
  for (const auto& p : parts_)
    if (p.name == name) return p;
  throw std::out_of_range("no wavefunction part named '" + std::string(name) + "'");
}

bool TwoPhotonWavefunction::has_part(std::string_view name) const {
  return std::any_of(parts_.begin(), parts_.end(), [&](const auto& p) { return p.name == name; });
}

std::pair<OrderedForm, OrderedForm> TwoPhotonWavefunction::combined(const PartFilter& filter) const {
  OrderedForm up, lo;
  for (const auto& p : parts_) {
    if (!filter(p)) continue;
    up += p.upper;
    lo += p.lower;
  }
  return {up, lo};
}

cplx TwoPhotonWavefunction::value(std::size_t i1, std::size_t i2, const PartFilter& filter, Side side) const {
  const auto [up, lo] = combined(filter);
  return i1 >= i2 ? evaluate(up, *kernels_, i1, side, i2, side) : evaluate(lo, *kernels_, i2, side, i1, side);
}

cplx TwoPhotonWavefunction::operator()(std::size_t i1, std::size_t i2, Side side) const {
  return value(i1, i2, all_parts(), side);
}

double TwoPhotonWavefunction::norm_squared(const PartFilter& filter) const {
  const auto [up, lo] = combined(filter);
  const double upper = half_plane_norm(up, *kernels_);
  const double lower = up == lo ? upper : half_plane_norm(lo, *kernels_);
  // Extrapolation can leave a rounding-level negative value for vanishing parts.
  return std::max(0.0, upper + lower);
}

DenseMatrix TwoPhotonWavefunction::materialize(std::size_t stride, const PartFilter& filter, Side side) const {
  if (stride == 0) throw std::invalid_argument("materialize: stride must be positive");
  const auto [up, lo] = combined(filter);
  const FormEvaluator eu(up, *kernels_), el(lo, *kernels_);
  const TimeGrid& g = kernels_->grid();
  DenseMatrix m;
  for (std::size_t i = 0; i < g.size(); i += stride) m.times.push_back(g[i]);
  const std::size_t r = m.times.size();
  m.data.resize(r * r);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      const std::size_t i1 = a * stride, i2 = b * stride;
      m(a, b) = i1 >= i2 ? eu.at(i1, side, i2, side) : el.at(i2, side, i1, side);
    }
  return m;
}

double TwoPhotonWavefunction::max_abs(const PartFilter& filter) const {
  const auto [up, lo] = combined(filter);
  const FormEvaluator eu(up, *kernels_), el(lo, *kernels_);
  const std::size_t n = kernels_->grid().size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (Side s : {Side::left, Side::right}) {
        best = std::max(best, std::abs(eu.at(i, s, j, s)));
        best = std::max(best, std::abs(el.at(i, s, j, s)));
      }
  return best;
}

}  // namespace wgscat
