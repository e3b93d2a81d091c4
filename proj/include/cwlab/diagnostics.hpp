#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "cwlab/ansatz.hpp"
#include "cwlab/composite_wave.hpp"
#include "cwlab/contact_profile.hpp"
#include "cwlab/gas_thermo.hpp"
#include "cwlab/ns_solver.hpp"

namespace cwlab {

/// Heat-kernel weight w = (1+t)^{-1/2} exp(-alpha x^2 / (1+t)) and its primitive g.
class WeightKernel {
 public:
  explicit WeightKernel(double alpha);

  double alpha() const { return alpha_; }
  double w(double x, double t) const;
  double g(double x, double t) const;
  /// g(+inf, t) = sqrt(pi / alpha), independent of t.
  double g_infinity() const;
  /// int w^2 dx = (1+t)^{-1/2} sqrt(pi / (2 alpha)).
  double w2_integral(double t) const;

 private:
  double alpha_;
};

struct EnergyReport {
  double t = 0.0;
  double C0_ref = 0.0;
  double entropy_total = 0.0;
  double G_t = 0.0;
  std::array<double, 3> G_groups{};  ///< dissipative, |U_x|-weighted, residual
  double D_t = 0.0;
  std::array<double, 4> D_groups{};  ///< Theta_x^2, U_x^2, source, Q2
  double sup_perturbation = 0.0;
  double l2_perturbation = 0.0;
  double h1_perturbation = 0.0;
  double omega2_measure = 0.0;
  double sigma_tilde = 0.0;
  double weighted_lhs = 0.0;    ///< int int (phi^2 + psi^2 + zeta^2) w^2
  double weighted_rhs = 0.0;    ///< int int (phi_x^2 + psi_x^2 + zeta_x^2)
  double weighted_ratio = 0.0;  ///< lhs / (1 + rhs)
};

/// psi^2/2 + R Theta Phi(v/V) + c_nu Theta Phi(theta/Theta).
double entropy_density(const GasParams& g, double v, double u, double theta,
                       const AnsatzSample& a);

/// Trapezoidal integral of entropy_density over the grid; equals C0 at t = 0.
double relative_entropy_total(const GasParams& g, const FieldState& field,
                              const AnsatzProfile& ansatz);

/// Adds dt times the three spatial integrals of G(t) for a contact ansatz,
/// evaluated on `field` (left rectangle in time).
void accumulate_G(EnergyReport& running, const GasParams& g, const FieldState& field,
                  const ContactWave& contact, double dt);

/// Adds dt times the four spatial integrals of D(t) for a composite ansatz.
void accumulate_D(EnergyReport& running, const GasParams& g, const FieldState& field,
                  const CompositeAnsatz& composite, double dt);

/// Adds dt times both sides of the weighted L^2 estimate and refreshes the ratio.
void weighted_square_integral(EnergyReport& running, const FieldState& field,
                              const AnsatzProfile& ansatz, const WeightKernel& kernel, double dt);

struct PerturbationNorms {
  double sup;
  double l2;
  double h1;
};

PerturbationNorms perturbation_norms(const FieldState& field, const AnsatzProfile& ansatz);

/// Measure of {x : theta / Theta > a}, counted on grid nodes.
double omega_measure(const FieldState& field, const AnsatzProfile& ansatz, double a);

/// Upper bound (3 / (1 - ln 2)) * entropy / (c_nu theta_min) for |Omega_2|.
double omega2_bound(const GasParams& g, double entropy, double theta_min);

double sigma_tilde(double t);

/// Roots alpha_1 < 1 < alpha_2 of y - ln y - 1 = min(3 C0 / (R theta_-), 3 C0 / (c_nu theta_-)).
std::pair<double, double> entropy_level_roots(const GasParams& g, double C0, double theta_minus);

struct DecayFit {
  bool is_decaying;
  double half_life;  ///< ln 2 / rate of the log-linear fit; +inf when not decaying
};

/// Needs >= 10 samples with (1 + t_last) >= 10 (1 + t_first); otherwise
/// throws Error{InsufficientSamples}.
DecayFit decay_fit(std::span<const double> t, std::span<const double> sup);

/// Accumulates the monitored functionals along a run. For a contact ansatz
/// G(t) is tracked; for a composite, D(t). The time integrals use the field
/// of the previous observation times the elapsed time.
class DiagnosticsObserver : public Observer {
 public:
  DiagnosticsObserver(GasParams g, const ContactWave& contact, std::optional<WeightKernel> kernel);
  DiagnosticsObserver(GasParams g, const CompositeAnsatz& composite,
                      std::optional<WeightKernel> kernel);

  void observe(const FieldState& state, std::size_t step) override;

  const std::vector<EnergyReport>& records() const { return records_; }
  bool has_G() const { return contact_ != nullptr; }
  bool has_D() const { return composite_ != nullptr; }
  /// Pointwise entropy density was >= 0 on every observed state.
  bool density_nonnegative() const { return density_ok_; }
  /// |Omega_2| stayed below omega2_bound on every observed state.
  bool omega2_bounded() const { return omega2_ok_; }

 private:
  const AnsatzProfile& ansatz() const;

  GasParams gas_;
  const ContactWave* contact_ = nullptr;
  const CompositeAnsatz* composite_ = nullptr;
  std::optional<WeightKernel> kernel_;
  double theta_min_ = 0.0;
  std::optional<FieldState> prev_;
  EnergyReport running_;
  std::vector<EnergyReport> records_;
  bool density_ok_ = true;
  bool omega2_ok_ = true;
};

}  // namespace cwlab
