#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace wgscat {

using cplx = std::complex<double>;

// Raised when inputs violate a numerical precondition (grid too coarse,
// support outside the grid, singular denominators). The CLI maps it to exit 2.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Physical configuration of the emitter pair. Rates are inverse times, phi is
// the optical phase accumulated between the emitters, delay is the travel
// time between them (zero means the Markov limit).
struct SystemParams {
  double g2 = 1.0;
  double delta = 0.0;
  double Delta = 0.0;
  double beta = 0.0;
  double phi = 0.0;
  double delay = 0.0;

  double delta_plus() const { return delta - Delta; }
  double delta_minus() const { return delta + Delta; }
  double delta_plus_prime() const { return delta + Delta - beta; }
  double delta_minus_prime() const { return delta - Delta - beta; }

  // Throws std::invalid_argument on g2 < 0, delay < 0 or non-finite fields.
  void validate() const;
};

struct DecayRates {
  cplx Gamma_plus;
  cplx Gamma_minus;
  cplx Gamma_ee;
  double gamma_c = 0.0;
  double gamma_s = 0.0;
};

// Collective rates of the bright (+) and dark (-) single-excitation states and
// of the doubly excited state.
DecayRates rates(const SystemParams& p);

// Rates with the separation phase replaced by phi + omega * delay.
DecayRates rates_at(const SystemParams& p, double omega, bool markov);

std::string describe(const SystemParams& p);

}  // namespace wgscat
