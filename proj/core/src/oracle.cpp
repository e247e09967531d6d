#include "wgscat/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wgscat {

namespace {

using Mat4 = Eigen::Matrix4cd;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

constexpr cplx I{0.0, 1.0};
constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

// Emitter pair in the bare basis {gg, eg, ge, ee}, with the two standing-wave
// channels as jump operators. Everything the integrator needs is read off
// these matrices.
struct EmitterModel {
  Mat2 A;                   // -i H_eff on the one-excitation block
  cplx a_ee;                // -i H_eff on |ee>
  std::array<Vec2, 2> v;    // L_k^dag |gg>
  std::array<Vec2, 2> w;    // <gg| L_k  (as a row, stored transposed)
  std::array<Vec2, 2> x;    // L_k |ee>
  std::array<Vec2, 2> y;    // <ee| L_k^dag  (row, stored transposed)
};

EmitterModel emitter_model(const SystemParams& p) {
  Mat4 s1 = Mat4::Zero(), s2 = Mat4::Zero();
  s1(0, 1) = 1.0;
  s1(2, 3) = 1.0;
  s2(0, 2) = 1.0;
  s2(1, 3) = 1.0;
  const double g = std::sqrt(p.g2);
  const Mat4 Lc = std::numbers::sqrt2 * g * std::cos(p.phi / 2.0) * (s1 + s2);
  const Mat4 Ld = std::numbers::sqrt2 * I * g * std::sin(p.phi / 2.0) * (s1 - s2);
  const Mat4 n1 = s1.adjoint() * s1, n2 = s2.adjoint() * s2;
  const Mat4 hop = s1.adjoint() * s2 + s2.adjoint() * s1;
  Mat4 ee = Mat4::Zero();
  ee(3, 3) = 1.0;
  const double J = p.Delta + p.g2 * std::sin(p.phi);
  const Mat4 H = -p.delta * (n1 + n2) + J * hop + p.beta * ee -
                 0.5 * I * (Lc.adjoint() * Lc + Ld.adjoint() * Ld);

  EmitterModel m;
  m.A = -I * H.block<2, 2>(1, 1);
  m.a_ee = -I * H(3, 3);
  const std::array<const Mat4*, 2> L{&Lc, &Ld};
  for (int k = 0; k < 2; ++k) {
    const Mat4 Ld_k = L[k]->adjoint();
    m.v[k] = Ld_k.block<2, 1>(1, 0);
    m.w[k] = L[k]->block<1, 2>(0, 1).transpose();
    m.x[k] = L[k]->block<2, 1>(1, 3);
    m.y[k] = Ld_k.block<1, 2>(3, 1).transpose();
  }
  return m;
}

// Input amplitude per standing-wave channel pair (c = 0, d = 1).
std::array<std::array<double, 2>, 2> input_mix(Geometry g) {
  switch (g) {
    case Geometry::standing: return {{{1.0, 0.0}, {0.0, 0.0}}};
    case Geometry::copropagating: return {{{0.5, 0.5}, {0.5, 0.5}}};
    case Geometry::counterpropagating: return {{{inv_sqrt2, 0.0}, {0.0, -inv_sqrt2}}};
  }
  throw std::invalid_argument("unknown geometry");
}

// Output basis: standing waves stay in c/d, travelling inputs go to a/b.
std::array<std::array<double, 2>, 2> output_basis(Geometry g) {
  if (g == Geometry::standing) return {{{1.0, 0.0}, {0.0, 1.0}}};
  return {{{inv_sqrt2, inv_sqrt2}, {inv_sqrt2, -inv_sqrt2}}};
}

// Crank-Nicolson propagator for y' = A y + b over one step h.
struct Stepper {
  Mat2 P, Q;
  Stepper(const Mat2& A, double h) {
    const Mat2 id = Mat2::Identity();
    const Mat2 inv = (id - 0.5 * h * A).inverse();
    P = inv * (id + 0.5 * h * A);
    Q = 0.5 * h * inv;
  }
};

void check_step(const SystemParams& p, double dt, const OracleOptions& o) {
  const double scale = std::max({p.g2, std::abs(p.delta_plus()), std::abs(p.delta_minus()),
                                 std::abs(p.delta_plus_prime()), std::abs(p.delta_minus_prime())});
  if (dt * scale > o.max_step_rate) {
    std::ostringstream os;
    os << "oracle step too coarse: dt = " << dt << " gives dt * rate = " << dt * scale << " > "
       << o.max_step_rate << "; use dt <= " << o.max_step_rate / scale;
    throw PreconditionError(os.str());
  }
}

// a^T b without conjugation.
cplx bilinear(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

struct Slot {
  std::size_t node;
  Side side;
  std::array<Vec2, 2> y;                  // emitter amplitude per output channel of the early photon
  std::array<Vec2, 2> qz;                 // Q * drive coefficient
  std::array<std::array<cplx, 2>, 2> xs;  // bypass coefficient [k1][k2], times f(t)
};

}  // namespace

TimeGrid oracle_grid(double T, double g2, double dt, double tail_rates) {
  if (!(T > 0.0) || !(dt > 0.0) || !(g2 > 0.0)) throw std::invalid_argument("oracle_grid: T, dt and g2 must be positive");
  const auto m = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  const double h = T / static_cast<double>(m);
  const std::size_t lead = 4;
  const auto tail = static_cast<std::size_t>(std::ceil(tail_rates / (g2 * h)));
  const std::size_t n = lead + m + tail + 1;
  const double t0 = -static_cast<double>(lead) * h;
  return TimeGrid(t0, t0 + static_cast<double>(n - 1) * h, n);
}

WavefunctionState evolve(const SystemParams& p, Geometry geometry, const PulseEnvelope& pulse,
                         const OracleOptions& options) {
  p.validate();
  const TimeGrid& grid = pulse.grid();
  const std::size_t n = grid.size();
  const double h = grid.dt();
  check_step(p, h, options);

  const EmitterModel em = emitter_model(p);
  const Stepper st(em.A, h);
  const cplx pe = (1.0 + 0.5 * h * em.a_ee) / (1.0 - 0.5 * h * em.a_ee);
  const cplx qe = 0.5 * h / (1.0 - 0.5 * h * em.a_ee);
  const auto alpha = input_mix(geometry);
  const auto U = output_basis(geometry);
  auto fl = [&](std::size_t i) { return pulse.at(i, Side::left); };
  auto fr = [&](std::size_t i) { return pulse.at(i, Side::right); };

  // Emitter amplitude while the second photon is still incoming, per input
  // channel of that photon: u' = A u - i sqrt2 sum_k alpha_kk' v_k f.
  std::array<std::vector<Vec2>, 2> u;
  std::array<Vec2, 2> beta;
  for (int kp = 0; kp < 2; ++kp) {
    beta[kp] = Vec2::Zero();
    for (int k = 0; k < 2; ++k) beta[kp] += -I * std::numbers::sqrt2 * alpha[k][kp] * em.v[k];
    u[kp].assign(n, Vec2::Zero());
    const Vec2 qb = st.Q * beta[kp];
    for (std::size_t i = 0; i + 1 < n; ++i) u[kp][i + 1] = st.P * u[kp][i] + qb * (fr(i) + fl(i + 1));
  }

  // Doubly excited amplitude.
  std::vector<cplx> psi_e(n, 0.0);
  {
    auto drive = [&](std::size_t i, cplx f) {
      cplx s = 0.0;
      for (int kp = 0; kp < 2; ++kp) s += bilinear(em.y[kp], u[kp][i]);
      return -I * s * f;
    };
    for (std::size_t i = 0; i + 1 < n; ++i)
      psi_e[i + 1] = pe * psi_e[i] + qe * (drive(i, fr(i)) + drive(i + 1, fl(i + 1)));
  }

  auto make_slot = [&](std::size_t j, Side side) {
    Slot s;
    s.node = j;
    s.side = side;
    const cplx ft = pulse.at(j, side);
    for (int k2 = 0; k2 < 2; ++k2) {
      s.y[k2] = ft * u[k2][j] - I * em.x[k2] * psi_e[j];
      Vec2 z = Vec2::Zero();
      for (int k = 0; k < 2; ++k) {
        const cplx m = -I * inv_sqrt2 * bilinear(em.w[k2], u[k][j]);
        s.xs[k][k2] = alpha[k][k2] * ft + m;
        z += -I * std::numbers::sqrt2 * em.v[k] * s.xs[k][k2];
      }
      s.qz[k2] = st.Q * z;
    }
    return s;
  };

  // Output amplitude in the output basis for a slot at late time value f(t).
  auto output = [&](const Slot& s, cplx ft) {
    std::array<std::array<cplx, 2>, 2> psi{};
    for (int k1 = 0; k1 < 2; ++k1)
      for (int k2 = 0; k2 < 2; ++k2)
        psi[k1][k2] = ft * s.xs[k1][k2] - I * inv_sqrt2 * bilinear(em.w[k1], s.y[k2]);
    std::array<cplx, 4> out{};
    for (int o1 = 0; o1 < 2; ++o1)
      for (int o2 = 0; o2 < 2; ++o2) {
        cplx acc = 0.0;
        for (int k1 = 0; k1 < 2; ++k1)
          for (int k2 = 0; k2 < 2; ++k2) acc += U[k1][o1] * U[k2][o2] * psi[k1][k2];
        out[2 * o1 + o2] = acc;
      }
    return out;
  };

  const std::size_t stride =
      std::max<std::size_t>(1, (n - 1 + options.max_record - 2) / std::max<std::size_t>(1, options.max_record - 1));
  WavefunctionState state;
  state.geometry = geometry;
  state.grid = grid;
  state.time = grid.t_end();
  for (std::size_t i = 0; i < n; i += stride) state.record_times.push_back(grid[i]);
  const std::size_t r = state.record_times.size();
  for (auto& m : state.psi_g) {
    m.times = state.record_times;
    m.data.assign(r * r, 0.0);
  }

  // Squared magnitudes along one row (fixed late time), per early slot side.
  struct Row {
    std::vector<std::array<double, 4>> right, left;
    void reset(std::size_t len) {
      right.assign(len, {});
      left.assign(len, {});
    }
  };
  Row prev, cur_left, cur_right;
  std::array<double, 4> upper{};
  const double w_cell = h * h / 4.0, w_diag = h * h / 6.0;

  std::vector<Slot> slots;
  slots.reserve(n + 64);
  auto fill_row = [&](Row& row, std::size_t i, cplx ft) {
    row.reset(i + 1);
    for (const auto& s : slots) {
      const auto out = output(s, ft);
      auto& dst = s.side == Side::left ? row.left[s.node] : row.right[s.node];
      for (int o = 0; o < 4; ++o) dst[o] = std::norm(out[o]);
    }
    // Continuous nodes have a single slot; mirror it to the other side.
    for (std::size_t j = 0; j <= i; ++j)
      if (!pulse.is_jump(j)) row.left[j] = row.right[j];
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const cplx fsum = fr(i - 1) + fl(i);
      for (auto& s : slots)
        for (int k2 = 0; k2 < 2; ++k2) s.y[k2] = st.P * s.y[k2] + s.qz[k2] * fsum;
    }
    if (pulse.is_jump(i)) slots.push_back(make_slot(i, Side::left));
    slots.push_back(make_slot(i, Side::right));

    fill_row(cur_left, i, fl(i));
    if (i > 0) {
      // Cells of row i-1: corners (i-1, j), (i-1, j+1), (i, j), (i, j+1).
      for (std::size_t j = 0; j + 1 < i; ++j)
        for (int o = 0; o < 4; ++o)
          upper[o] += w_cell * (prev.right[j][o] + prev.left[j + 1][o] + cur_left.right[j][o] + cur_left.left[j + 1][o]);
      for (int o = 0; o < 4; ++o)
        upper[o] += w_diag * (prev.right[i - 1][o] + cur_left.right[i - 1][o] + cur_left.left[i][o]);
    }
    if (pulse.is_jump(i)) {
      fill_row(cur_right, i, fr(i));
      prev = cur_right;
    } else {
      prev = cur_left;
    }

    if (i % stride == 0) {
      const std::size_t a = i / stride;
      // Midpoint convention at jumps in both times, as in the closed forms.
      for (const auto& s : slots) {
        if (s.node % stride != 0) continue;
        const auto out = output(s, pulse.at(i, Side::mid));
        const std::size_t b = s.node / stride;
        const double w = pulse.is_jump(s.node) ? 0.5 : 1.0;
        for (int o = 0; o < 4; ++o) state.psi_g[o](a, b) += w * out[o];
      }
    }
  }
  // Lower half from exchange symmetry.
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b)
      for (int o1 = 0; o1 < 2; ++o1)
        for (int o2 = 0; o2 < 2; ++o2) state.psi_g[2 * o1 + o2](a, b) = state.psi_g[2 * o2 + o1](b, a);

  for (int o1 = 0; o1 < 2; ++o1)
    for (int o2 = 0; o2 < 2; ++o2) state.pair_norms[2 * o1 + o2] = upper[2 * o1 + o2] + upper[2 * o2 + o1];

  // Leftover one-excitation amplitude, in the output basis of the emitted photon.
  std::vector<std::array<Vec2, 2>> left_over_right(n), left_over_left(n);
  for (const auto& s : slots) {
    std::array<Vec2, 2> o{Vec2::Zero(), Vec2::Zero()};
    for (int o2 = 0; o2 < 2; ++o2)
      for (int k2 = 0; k2 < 2; ++k2) o[o2] += U[k2][o2] * s.y[k2];
    (s.side == Side::left ? left_over_left : left_over_right)[s.node] = o;
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!pulse.is_jump(j)) left_over_left[j] = left_over_right[j];
  auto sq = [](const std::array<Vec2, 2>& v) { return v[0].squaredNorm() + v[1].squaredNorm(); };
  double one = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) one += 0.5 * h * (sq(left_over_right[j]) + sq(left_over_left[j + 1]));
  state.one_photon_norm = one;
  for (int o2 = 0; o2 < 2; ++o2) {
    state.psi_plus[o2].reserve(r);
    state.psi_minus[o2].reserve(r);
    for (std::size_t j = 0; j < n; j += stride) {
      const Vec2& v = left_over_right[j][o2];
      state.psi_plus[o2].push_back(inv_sqrt2 * (v[0] + v[1]));
      state.psi_minus[o2].push_back(inv_sqrt2 * (v[0] - v[1]));
    }
  }

  state.psi_e_trace = std::move(psi_e);
  state.psi_e = state.psi_e_trace.back();
  double total = one + std::norm(state.psi_e);
  for (double v : state.pair_norms) total += v;
  state.total_norm = total;
  state.norm_drift = std::abs(total - pulse.norm_squared() * pulse.norm_squared());
  if (state.norm_drift > options.drift_tolerance) {
    std::ostringstream os;
    os << "oracle norm drift " << state.norm_drift << " exceeds " << options.drift_tolerance
       << " (total " << total << ")";
    throw PreconditionError(os.str());
  }
  return state;
}

std::vector<OracleChannel> extract_two_photon(const WavefunctionState& s, const OracleOptions& options) {
  const double residual = s.one_photon_norm + std::norm(s.psi_e);
  if (residual > options.residual_threshold) {
    std::ostringstream os;
    os << "not asymptotic: excitation " << residual << " left at t = " << s.time << " (threshold "
       << options.residual_threshold << ")";
    throw PreconditionError(os.str());
  }
  const auto& n = s.pair_norms;
  auto scaled = [](DenseMatrix m, double k) {
    for (auto& v : m.data) v *= k;
    return m;
  };
  std::vector<OracleChannel> out;
  switch (s.geometry) {
    case Geometry::standing:
      out.push_back({Channel::cc, "c port", 1.0, s.psi_g[0], n[0]});
      out.push_back({Channel::dd, "d port", 1.0, s.psi_g[3], n[3]});
      break;
    case Geometry::copropagating:
      out.push_back({Channel::aa, "both transmitted", 1.0, s.psi_g[0], n[0]});
      out.push_back({Channel::bb, "both reflected", 1.0, s.psi_g[3], n[3]});
      out.push_back({Channel::ab, "split", 2.0, s.psi_g[1], n[1] + n[2]});
      break;
    case Geometry::counterpropagating:
      out.push_back({Channel::aa, "same direction", 2.0, s.psi_g[0], n[0] + n[3]});
      out.push_back({Channel::ab, "opposite directions", 1.0, scaled(s.psi_g[1], std::numbers::sqrt2), n[1] + n[2]});
      break;
  }
  return out;
}

std::array<std::vector<cplx>, 2> evolve_single_photon(const SystemParams& p, Branch input, const PulseEnvelope& pulse,
                                                      const OracleOptions& options) {
  p.validate();
  const TimeGrid& grid = pulse.grid();
  const std::size_t n = grid.size();
  check_step(p, grid.dt(), options);
  const EmitterModel em = emitter_model(p);
  const Stepper st(em.A, grid.dt());
  const int kin = input == Branch::plus ? 0 : 1;
  const Vec2 qb = st.Q * (-I * em.v[kin]);

  std::array<std::vector<cplx>, 2> out{std::vector<cplx>(n), std::vector<cplx>(n)};
  Vec2 psi = Vec2::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) psi = st.P * psi + qb * (pulse.at(i - 1, Side::right) + pulse.at(i, Side::left));
    for (int k = 0; k < 2; ++k) {
      const cplx bypass = k == kin ? pulse.at(i, Side::mid) : cplx(0.0);
      out[k][i] = bypass - I * bilinear(em.w[k], psi);
    }
  }
  return out;
}

}  // namespace wgscat
