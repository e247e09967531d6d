#include "wgscat/params.hpp"

#include <cmath>
#include <sstream>

namespace wgscat {

void SystemParams::validate() const {
  for (double v : {g2, delta, Delta, beta, phi, delay}) {
    if (!std::isfinite(v)) throw std::invalid_argument("system parameters must be finite");
  }
  if (g2 < 0.0) throw std::invalid_argument("coupling g2 must be non-negative");
  if (delay < 0.0) throw std::invalid_argument("propagation delay must be non-negative");
}

DecayRates rates_at(const SystemParams& p, double omega, bool markov) {
  const double phase = markov ? p.phi : p.phi + omega * p.delay;
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  DecayRates r;
  r.gamma_c = p.g2 * (1.0 + c);
  // 1 + c never exceeds 2, so the difference below is non-negative and the two
  // real parts add up to 2 g2 without rounding drift.
  r.gamma_s = 2.0 * p.g2 - r.gamma_c;
  r.Gamma_plus = {r.gamma_c, p.g2 * s - p.delta_plus()};
  r.Gamma_minus = {r.gamma_s, -p.g2 * s - p.delta_minus()};
  r.Gamma_ee = {2.0 * p.g2, -(2.0 * p.delta - p.beta)};
  return r;
}

DecayRates rates(const SystemParams& p) { return rates_at(p, 0.0, true); }

std::string describe(const SystemParams& p) {
  std::ostringstream os;
  os << "g2=" << p.g2 << " delta=" << p.delta << " Delta=" << p.Delta << " beta=" << p.beta
     << " phi=" << p.phi << " delay=" << p.delay;
  return os.str();
}

}  // namespace wgscat
