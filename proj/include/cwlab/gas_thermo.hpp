#pragma once

// Ideal polytropic gas: p = R theta / v = A v^-gamma exp((gamma-1) s / R),
// e = c_nu theta, c_nu = R / (gamma - 1).

namespace cwlab {

enum class Family { minus, plus };

inline double family_sign(Family f) { return f == Family::plus ? 1.0 : -1.0; }

class GasParams {
 public:
  /// Throws std::invalid_argument unless every field is finite and positive
  /// and gamma > 1.
  GasParams(double R, double gamma, double mu, double kappa, double A = 1.0);

  /// gamma = 5/3 with R = mu = kappa = A = 1.
  static GasParams monatomic_unit();

  double R() const { return R_; }
  double gamma() const { return gamma_; }
  double mu() const { return mu_; }
  double kappa() const { return kappa_; }
  double A() const { return A_; }
  double c_nu() const { return R_ / (gamma_ - 1.0); }

  bool operator==(const GasParams&) const = default;

 private:
  double R_, gamma_, mu_, kappa_, A_;
};

/// (v, u, theta) with v > 0 and theta > 0.
class ThermoState {
 public:
  ThermoState(double v, double u, double theta);

  double v() const { return v_; }
  double u() const { return u_; }
  double theta() const { return theta_; }

  ThermoState with_u(double u) const { return {v_, u, theta_}; }

  bool operator==(const ThermoState&) const = default;

 private:
  double v_, u_, theta_;
};

double pressure(const GasParams& g, const ThermoState& s);
double pressure(const GasParams& g, double v, double theta);

double entropy(const GasParams& g, const ThermoState& s);
double entropy(const GasParams& g, double v, double theta);

/// Temperature on the isentrope `s` at specific volume v.
double temperature_on_isentrope(const GasParams& g, double v, double s);

/// Eulerian sound speed sqrt(gamma R theta).
double sound_speed(const GasParams& g, double theta);

/// Lagrangian characteristic speed lambda_{+-}(v, s) = +-sqrt(A gamma v^{-gamma-1} e^{(gamma-1)s/R}).
double lambda(const GasParams& g, Family family, double v, double s);

/// Phi(z) = z - ln z - 1, z > 0.
double phi_kernel(double z);

}  // namespace cwlab
