#pragma once

#include <array>
#include <string>
#include <vector>

#include "wgscat/channels.hpp"
#include "wgscat/pulse.hpp"
#include "wgscat/wavefunction.hpp"

namespace wgscat {

// Brute-force Markov-limit integrator for one and two photons scattering off
// the emitter pair. The pair is described in the bare basis
// {gg, eg, ge, ee} with the two standing-wave channels acting as independent
// jump operators; the photon field is a conveyor of time bins that pass the
// emitters one step at a time. No closed-form kernel is used.

struct OracleOptions {
  std::size_t max_record = 512;      // record grid size for the two-photon amplitude
  double max_step_rate = 1e-3;       // dt * max(g2, |detunings|) must not exceed this
  double drift_tolerance = 1e-4;     // allowed |total norm - 1|
  double residual_threshold = 1e-6;  // allowed leftover excitation for extraction
};

struct WavefunctionState {
  Geometry geometry = Geometry::standing;
  TimeGrid grid{0.0, 1.0, 2};
  double time = 0.0;

  // Output two-photon amplitude on the record grid, in the output basis of the
  // geometry (c/d for standing waves, a/b for travelling inputs); index
  // 2 * o1 + o2 with o1 the channel of the photon at t1.
  std::vector<double> record_times;
  std::array<DenseMatrix, 4> psi_g;

  // Full-plane squared norms of the four output pairs on the step grid.
  std::array<double, 4> pair_norms{};

  // Leftover one-excitation amplitudes at the final time, per output channel of
  // the emitted photon, in the bright/dark basis, sampled on the record grid.
  std::array<std::vector<cplx>, 2> psi_plus;
  std::array<std::vector<cplx>, 2> psi_minus;
  double one_photon_norm = 0.0;

  // Doubly excited amplitude on the step grid and its final value.
  std::vector<cplx> psi_e_trace;
  cplx psi_e;

  double total_norm = 0.0;
  double norm_drift = 0.0;
};

// Grid for oracle runs: spacing dt adjusted to divide T, a short lead before
// t = 0 and `tail_rates / g2` after the pulse.
TimeGrid oracle_grid(double T, double g2, double dt, double tail_rates = 15.0);

// Two-photon run for the pulse on its own grid (the grid spacing is the step).
// Throws PreconditionError if the step is too coarse or the norm drifts.
WavefunctionState evolve(const SystemParams& p, Geometry geometry, const PulseEnvelope& pulse,
                         const OracleOptions& options = {});

struct OracleChannel {
  Channel channel;
  std::string outcome;
  double weight = 1.0;
  DenseMatrix values;  // same amplitude convention as the closed-form channels
  double probability = 0.0;
};

// Channel amplitudes and probabilities in the closed-form conventions.
// Throws PreconditionError ("not asymptotic") if excitation is left over.
std::vector<OracleChannel> extract_two_photon(const WavefunctionState& state,
                                              const OracleOptions& options = {});

// One photon in standing-wave mode c (plus) or d (minus). Returns the output
// amplitude in modes c and d on the pulse grid (midpoint values at jumps).
std::array<std::vector<cplx>, 2> evolve_single_photon(const SystemParams& p, Branch input, const PulseEnvelope& pulse,
                                                      const OracleOptions& options = {});

}  // namespace wgscat
