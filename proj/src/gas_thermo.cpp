#include "cwlab/gas_thermo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cwlab {

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw std::invalid_argument(std::string(name) + " must be finite and positive, got " +
                                std::to_string(value));
  }
}

}  // namespace

GasParams::GasParams(double R, double gamma, double mu, double kappa, double A)
    : R_(R), gamma_(gamma), mu_(mu), kappa_(kappa), A_(A) {
  require_positive(R, "R");
  require_positive(mu, "mu");
  require_positive(kappa, "kappa");
  require_positive(A, "A");
  if (!std::isfinite(gamma) || gamma <= 1.0) {
    throw std::invalid_argument("gamma must be finite and > 1");
  }
}

GasParams GasParams::monatomic_unit() { return {1.0, 5.0 / 3.0, 1.0, 1.0, 1.0}; }

ThermoState::ThermoState(double v, double u, double theta) : v_(v), u_(u), theta_(theta) {
  require_positive(v, "v");
  require_positive(theta, "theta");
  if (!std::isfinite(u)) throw std::invalid_argument("u must be finite");
}

double pressure(const GasParams& g, double v, double theta) { return g.R() * theta / v; }

double pressure(const GasParams& g, const ThermoState& s) { return pressure(g, s.v(), s.theta()); }

double entropy(const GasParams& g, double v, double theta) {
  return g.c_nu() * std::log(g.R() * theta / g.A()) + g.R() * std::log(v);
}

double entropy(const GasParams& g, const ThermoState& s) { return entropy(g, s.v(), s.theta()); }

double temperature_on_isentrope(const GasParams& g, double v, double s) {
  return (g.A() / g.R()) * std::exp((s - g.R() * std::log(v)) / g.c_nu());
}

double sound_speed(const GasParams& g, double theta) { return std::sqrt(g.gamma() * g.R() * theta); }

double lambda(const GasParams& g, Family family, double v, double s) {
  if (!(v > 0.0)) throw std::invalid_argument("lambda: v must be positive");
  const double gm = g.gamma();
  const double mag =
      std::sqrt(g.A() * gm * std::pow(v, -gm - 1.0) * std::exp((gm - 1.0) * s / g.R()));
  return family_sign(family) * mag;
}

double phi_kernel(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("phi_kernel: z must be positive");
  const double e = z - 1.0;
  if (std::abs(e) < 0.05) {
    // sum_{k>=2} (-1)^k e^k / k, no cancellation near the minimum
    double term = e * e;
    double sum = 0.0;
    for (int k = 2; k < 18; ++k) {
      sum += ((k % 2 == 0) ? 1.0 : -1.0) * term / k;
      term *= e;
    }
    return sum;
  }
  return e - std::log(z);
}

}  // namespace cwlab
