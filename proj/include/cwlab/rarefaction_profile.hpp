#pragma once

#include <span>
#include <vector>

#include "cwlab/ansatz.hpp"
#include "cwlab/gas_thermo.hpp"

namespace cwlab {

/// Monotone tanh data for w_t + w w_x = 0:
///   w0(x) = (w_r + w_l)/2 + ((w_r - w_l)/2) tanh x,  w_l <= w_r.
class BurgersWave {
 public:
  BurgersWave(double w_l, double w_r);

  double w_l() const { return w_l_; }
  double w_r() const { return w_r_; }
  double strength() const { return w_r_ - w_l_; }

 private:
  double w_l_, w_r_;
};

struct BurgersSample {
  double w;
  double w_x;
  double above_left;   ///< w - w_l, without cancellation
  double below_right;  ///< w_r - w, without cancellation
  double foot;         ///< characteristic foot x0 with x = x0 + w0(x0) t
};

/// Exact solution by characteristics. Newton on x0 + w0(x0) t = x with a
/// bisection fallback on [x - w_r t, x - w_l t]. Throws Error{ConvergenceFailure}
/// if the root residual stays above tol.
BurgersSample burgers_eval(const BurgersWave& b, double x, double t, double tol = 1e-13);

/// Centred scalar fan w^r(x/t) for the Riemann data (w_l, w_r).
double burgers_fan(const BurgersWave& b, double xi);

struct RarefactionSample {
  double V, U, Theta;
  double V_x, U_x, Theta_x;
  double w;
};

/// Smooth approximate rarefaction: lambda_family(V, s_anchor) = w(x, t) on the
/// isentrope of the anchor, U along the rarefaction curve, Theta from the
/// isentrope. The 1-wave (minus) is anchored at the left far state and runs
/// to the middle volume; the 3-wave (plus) is anchored at the right far state.
class RarefactionWave : public AnsatzProfile {
 public:
  RarefactionWave(GasParams gas, Family family, ThermoState anchor, double target_vm);

  AnsatzSample evaluate(double x, double t) const override;
  RarefactionSample evaluate_full(double x, double t) const;

  Family family() const { return family_; }
  const ThermoState& anchor() const { return anchor_; }
  double target_vm() const { return target_vm_; }
  const BurgersWave& burgers() const { return burgers_; }
  double entropy_level() const { return s_; }
  bool degenerate() const { return burgers_.strength() == 0.0; }

 private:
  GasParams gas_;
  Family family_;
  ThermoState anchor_;
  double target_vm_;
  double s_;
  BurgersWave burgers_;
  double v_left_, v_right_;  // volumes at w_l and w_r
};

struct LpRateRow {
  double p;  ///< +inf for the sup norm
  double t;
  double norm;
};

struct LpRateTable {
  std::vector<LpRateRow> rows;
  std::vector<double> exponents;
  std::vector<double> slopes;  ///< fitted d log||w_x||_p / d log t, per exponent
};

/// ||w_x(t)||_{L^p(R)} by adaptive Gauss-Kronrod quadrature over the
/// characteristic foot (p < inf) or Brent maximization (p = inf).
double burgers_wx_norm(const BurgersWave& b, double p, double t);

/// Measured norms and log-log slopes. Throws Error{QuadratureFailure} when the
/// quadrature error estimate is not small.
LpRateTable lp_rate_report(const BurgersWave& b, std::span<const double> p_exponents,
                           std::span<const double> t_samples);

}  // namespace cwlab
