#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "cwlab/ansatz.hpp"
#include "cwlab/gas_thermo.hpp"
#include "cwlab/riemann_waves.hpp"

namespace cwlab {

/// Theta(xi) on a uniform xi grid over [-Xi, Xi], solving
///   -(xi/2) Theta' = b (Theta'/Theta)',  Theta(+-Xi) = theta_+-,
/// with b = kappa p_+ (gamma-1) / (gamma R^2).
struct SelfSimilarProfile {
  std::vector<double> xi;
  std::vector<double> theta;
  std::vector<double> dtheta;
  double theta_minus;
  double theta_plus;
  double p_plus;
  double b_coeff;
  double Xi;
  double ode_residual;    ///< max-norm of the discrete ODE residual
  double boundary_error;  ///< max |Theta(+-Xi) - theta_+-|
  int iterations;

  double spacing() const { return xi[1] - xi[0]; }
};

struct ProfileOptions {
  double Xi = 20.0;
  int n_points = 8001;
  double tol = 1e-10;

  bool operator==(const ProfileOptions&) const = default;
};

/// Damped Newton on a fourth-order finite-difference discretization in
/// y = ln Theta, with a pseudo-transient fallback. Throws
/// Error{ConvergenceFailure} or Error{TruncationTooSmall}.
SelfSimilarProfile solve_self_similar(const GasParams& g, double theta_minus, double theta_plus,
                                      double p_plus, const ProfileOptions& opts = {});

/// Everything the contact layer needs at one point, with analytic
/// chain-rule derivatives.
struct ContactSample {
  double V, U, Theta;
  double V_x, U_x, Theta_x;
  double Theta_xx, Theta_xxx, U_xx;
  double Theta_t, V_t, U_t;
};

struct ContactResiduals {
  double R1;  ///< U_t - mu (U_x / V)_x
  double R2;  ///< -mu U_x^2 / V
};

struct DecayConstants {
  double c1;     ///< Gaussian rate in exp(-c1 x^2 / (1+t))
  double alpha;  ///< weight-kernel rate, c1 / 4
  std::optional<double> c0;  ///< exponential region rate, fitted from a composite
  double bound_constant;     ///< max of the scaled quantities over the lattice
};

/// Viscous contact wave V = R Theta / p_+, U = kappa (gamma-1)/(gamma R) Theta_x / Theta,
/// Theta = Theta(x / sqrt(1+t)). Outside [-Xi, Xi] the profile is extended by
/// the constants theta_+- with zero derivatives.
class ContactWave : public AnsatzProfile {
 public:
  ContactWave(GasParams gas, SelfSimilarProfile profile);

  /// Builds the wave connecting contact-compatible end states (u_- = u_+ is
  /// carried as a constant velocity offset).
  static ContactWave from_ends(const GasParams& g, const EndStates& ends,
                               const ProfileOptions& opts = {});

  AnsatzSample evaluate(double x, double t) const override;
  ContactSample evaluate_full(double x, double t) const;
  ContactResiduals residuals(double x, double t) const;

  /// Theta, Theta' and Theta'' at a similarity coordinate.
  struct XiSample {
    double theta, d1, d2, d3;
  };
  XiSample at_xi(double xi) const;

  const SelfSimilarProfile& profile() const { return profile_; }
  const GasParams& gas() const { return gas_; }
  double delta() const { return std::abs(profile_.theta_plus - profile_.theta_minus); }
  double u_offset() const { return u_offset_; }

 private:
  GasParams gas_;
  SelfSimilarProfile profile_;
  double u_coeff_;
  double u_offset_ = 0.0;
};

/// Largest c1 for which (1+t)|Theta_xx| + (1+t)^{1/2}|Theta_x| + |Theta - theta_+-|
/// stays below a constant times delta exp(-c1 x^2/(1+t)) on the lattice. The
/// envelope is 4x the peak; points nine decades below the peak are ignored.
/// Throws Error{DegenerateWave} for delta == 0.
DecayConstants fit_decay_constants(const ContactWave& w, std::span<const double> t_samples,
                                   std::span<const double> x_samples);

}  // namespace cwlab
