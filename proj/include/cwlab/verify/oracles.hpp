#pragma once

// Reference computations that share no numerical path with the library code
// they check: different discretizations, bisection instead of Newton,
// quadrature instead of closed forms, extended precision.

#include <cstdint>
#include <random>
#include <vector>

#include "cwlab/gas_thermo.hpp"
#include "cwlab/riemann_waves.hpp"

namespace cwlab::oracle {

struct MarchedProfile {
  std::vector<double> xi;
  std::vector<double> theta;
  double last_change;  ///< max |dTheta/dtau| at the final pseudo-time
};

/// Marches Theta_tau = (xi/2) Theta_xi + b (Theta_xi/Theta)_xi to steady state
/// with explicit Euler and second-order central differences in Theta.
MarchedProfile march_self_similar(double b, double theta_minus, double theta_plus, double Xi,
                                  double h, double tau_end);

/// Phi(z) = z - ln z - 1 in 50-digit arithmetic, rounded to double.
double phi_extended(double z);

/// Burgers solution by plain bisection on the characteristic foot.
double burgers_bisect(double w_l, double w_r, double x, double t);

/// u_anchor - int_{v_anchor}^{v} lambda_family d eta by adaptive Gauss-Kronrod.
double rarefaction_u_quadrature(const GasParams& g, Family family, const ThermoState& anchor,
                                double v);

struct ForwardRiemann {
  EndStates ends;
  WaveDecomposition middle;
};

/// Forward construction of a rarefaction-contact-rarefaction solution from the
/// left state, the middle pressure, the right middle temperature and the
/// right pressure, with velocities from quadrature.
ForwardRiemann construct_r1cr3(const GasParams& g, const ThermoState& left, double p_m,
                               double theta_m_plus, double p_right);

/// First printed form of Q1:
///   (gamma-1) P Phi(v/V) + P phi^2/(vV) - P Phi(Theta/theta) + (zeta/theta)(p - P).
double q1_unfactored(const GasParams& g, double v, double theta, double V, double Theta);

/// Uniform draws from one seeded stream.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : gen_(seed) {}
  double operator()(double a, double b) {
    return a + (b - a) * static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 gen_;
};

/// Random forward construction with |theta_+ - theta_-| <= max_delta and
/// middle pressure 1-25% below both end pressures.
ForwardRiemann random_r1cr3(const GasParams& g, Draw& draw, double max_delta);

/// Largest componentwise difference of two middle-state sets.
double middle_error(const WaveDecomposition& a, const WaveDecomposition& b);

}  // namespace cwlab::oracle
