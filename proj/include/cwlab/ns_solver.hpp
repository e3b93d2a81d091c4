#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cwlab/ansatz.hpp"
#include "cwlab/gas_thermo.hpp"

namespace cwlab {

/// n uniform cells on [x_min, x_max]; fields live on the n + 1 nodes.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, std::size_t n);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t n() const { return n_; }
  std::size_t nodes() const { return n_ + 1; }
  double dx() const { return dx_; }
  double x(std::size_t i) const {
    return i == n_ ? x_max_ : x_min_ + dx_ * static_cast<double>(i);
  }

  bool operator==(const Grid1D&) const = default;

 private:
  double x_min_, x_max_;
  std::size_t n_;
  double dx_;
};

struct FieldState {
  Grid1D grid;
  double t = 0.0;
  std::vector<double> v, u, theta;
};

enum class PerturbationKind { gaussian_bump, compact_cosine, random_fourier };

/// Initial perturbation (phi0, psi0, zeta0) = amplitudes * shape(x). The
/// shape is exp(-((x-c)/w)^2), cos^2(pi (x-c) / (2w)) on |x-c| < w, or a
/// seeded sum of Fourier modes under the Gaussian envelope (one draw per field).
struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::gaussian_bump;
  double amp_phi = 0.0;
  double amp_psi = 0.0;
  double amp_zeta = 0.0;
  double width = 5.0;
  double center = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const PerturbationSpec&) const = default;
};

struct Perturbation {
  std::vector<double> phi, psi, zeta;
};

/// Samples the perturbation on the grid. Throws std::invalid_argument when the envelope of a
/// nonzero perturbation is not negligible (> 1e-12) at either domain edge.
Perturbation sample_perturbation(const PerturbationSpec& spec, const Grid1D& grid);

enum class BoundaryMode { pin_to_ansatz, extrapolate };

struct SolverConfig {
  double cfl_hyperbolic = 0.4;
  double diff_number = 0.25;
  double t_end = 0.0;
  std::size_t output_stride = 100;
  BoundaryMode boundary_mode = BoundaryMode::pin_to_ansatz;
  /// Snapshots at multiples of this interval (0: only the first and last state).
  double snapshot_interval = 0.0;

  bool operator==(const SolverConfig&) const = default;
};

/// (v, u, theta)(x, 0) = (V, U, Theta)(x, 0) + perturbation. Throws
/// PositivityViolation when v or theta is not positive somewhere.
FieldState initialize(const GasParams& g, const AnsatzProfile& ansatz,
                      const PerturbationSpec& pert, const Grid1D& grid);

/// Called with the initial state, every output_stride steps, and the final state.
class Observer {
 public:
  virtual ~Observer() = default;
  virtual void observe(const FieldState& state, std::size_t step) = 0;
};

struct Trajectory {
  std::vector<FieldState> snapshots;
  std::size_t steps = 0;
  double wall_seconds = 0.0;
  double min_v = 0.0;      ///< smallest v over every completed step
  double min_theta = 0.0;  ///< smallest theta over every completed step
};

/// Method-of-lines solver for
///   v_t = u_x,  u_t + p_x = mu (u_x / v)_x,
///   c_nu theta_t + p u_x = (kappa theta_x / v)_x + mu u_x^2 / v,
/// with central differences, half-node fluxes, and three-stage SSP Runge-Kutta.
class NsSolver {
 public:
  NsSolver(GasParams gas, const AnsatzProfile& ansatz, SolverConfig cfg);

  /// min(hyperbolic, viscous) step restriction for the state.
  double stable_dt(const FieldState& s) const;

  /// Advances s by exactly dt. Throws PositivityViolation or Error{BlowUp}.
  void step(FieldState& s, double dt);

  /// Steps to cfg.t_end. Errors are rethrown with the step count and wall time.
  Trajectory run(FieldState s, const std::vector<Observer*>& observers = {});

  const SolverConfig& config() const { return cfg_; }

 private:
  void rhs(const FieldState& s, std::vector<double>& dv, std::vector<double>& du,
           std::vector<double>& dth) const;
  void apply_boundary(FieldState& s, double t) const;
  void check_state(const FieldState& s, double dt) const;

  GasParams gas_;
  const AnsatzProfile& ansatz_;
  SolverConfig cfg_;
  std::vector<double> k1v_, k1u_, k1t_;
  mutable std::vector<double> p_, inv_v_, sig_, q_;
  FieldState stage_{Grid1D(0.0, 1.0, 16), 0.0, {}, {}, {}};
};

/// One step of size min(stable_dt, t_end - t) with a fresh solver.
FieldState step(const GasParams& g, const FieldState& s, const SolverConfig& cfg,
                const AnsatzProfile& ansatz);

}  // namespace cwlab
