#include "cwlab/ns_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cwlab/errors.hpp"

namespace cwlab {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n) : x_min_(x_min), x_max_(x_max), n_(n) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw std::invalid_argument("Grid1D: need finite x_min < x_max");
  }
  if (n < 16) throw std::invalid_argument("Grid1D: need at least 16 cells");
  dx_ = (x_max - x_min) / static_cast<double>(n);
}

namespace {

constexpr int kFourierModes = 6;

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct FourierDraw {
  double amp[kFourierModes];
  double phase[kFourierModes];
};

FourierDraw draw_modes(std::mt19937_64& gen) {
  FourierDraw d{};
  for (int k = 0; k < kFourierModes; ++k) {
    d.amp[k] = 2.0 * uniform01(gen) - 1.0;
    d.phase[k] = 2.0 * std::numbers::pi * uniform01(gen);
  }
  return d;
}

double envelope(const PerturbationSpec& p, double x) {
  const double z = (x - p.center) / p.width;
  if (p.kind == PerturbationKind::compact_cosine) {
    if (std::abs(z) >= 1.0) return 0.0;
    const double c = std::cos(0.5 * std::numbers::pi * z);
    return c * c;
  }
  return std::exp(-z * z);
}

}  // namespace

Perturbation sample_perturbation(const PerturbationSpec& spec, const Grid1D& grid) {
  if (!(spec.width > 0.0) || !std::isfinite(spec.center)) {
    throw std::invalid_argument("perturbation: need width > 0 and a finite center");
  }
  for (double a : {spec.amp_phi, spec.amp_psi, spec.amp_zeta}) {
    if (!std::isfinite(a)) throw std::invalid_argument("perturbation: non-finite amplitude");
  }
  const bool silent = spec.amp_phi == 0.0 && spec.amp_psi == 0.0 && spec.amp_zeta == 0.0;
  for (double edge : {grid.x_min(), grid.x_max()}) {
    if (!silent && envelope(spec, edge) > 1e-12) {
      throw std::invalid_argument("perturbation: envelope does not vanish at the domain edge");
    }
  }
  const std::size_t m = grid.nodes();
  Perturbation out{std::vector<double>(m), std::vector<double>(m), std::vector<double>(m)};
  FourierDraw draws[3]{};
  if (spec.kind == PerturbationKind::random_fourier) {
    std::mt19937_64 gen(spec.seed);
    for (auto& d : draws) d = draw_modes(gen);
  }
  const double amps[3] = {spec.amp_phi, spec.amp_psi, spec.amp_zeta};
  std::vector<double>* fields[3] = {&out.phi, &out.psi, &out.zeta};
  for (std::size_t i = 0; i < m; ++i) {
    const double x = grid.x(i);
    const double env = envelope(spec, x);
    for (int f = 0; f < 3; ++f) {
      double shape = env;
      if (spec.kind == PerturbationKind::random_fourier) {
        double sum = 0.0;
        const double z = (x - spec.center) / spec.width;
        for (int k = 0; k < kFourierModes; ++k) {
          sum += draws[f].amp[k] * std::cos((k + 1) * z + draws[f].phase[k]);
        }
        shape = env * sum / kFourierModes;
      }
      (*fields[f])[i] = amps[f] * shape;
    }
  }
  return out;
}

FieldState initialize(const GasParams& g, const AnsatzProfile& ansatz,
                      const PerturbationSpec& pert, const Grid1D& grid) {
  (void)g;
  const Perturbation p = sample_perturbation(pert, grid);
  FieldState s{grid, 0.0, {}, {}, {}};
  const std::size_t m = grid.nodes();
  s.v.resize(m);
  s.u.resize(m);
  s.theta.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const AnsatzSample a = ansatz.evaluate(grid.x(i), 0.0);
    s.v[i] = a.V + p.phi[i];
    s.u[i] = a.U + p.psi[i];
    s.theta[i] = a.Theta + p.zeta[i];
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!(s.v[i] > 0.0)) throw PositivityViolation(0.0, i, 'v', s.v[i], 0.0, "initial data");
    if (!(s.theta[i] > 0.0)) {
      throw PositivityViolation(0.0, i, 'T', s.theta[i], 0.0, "initial data");
    }
  }
  return s;
}

NsSolver::NsSolver(GasParams gas, const AnsatzProfile& ansatz, SolverConfig cfg)
    : gas_(gas), ansatz_(ansatz), cfg_(cfg) {
  if (!(cfg_.cfl_hyperbolic > 0.0) || !(cfg_.diff_number > 0.0)) {
    throw std::invalid_argument("SolverConfig: cfl_hyperbolic and diff_number must be positive");
  }
  if (!(cfg_.t_end >= 0.0) || !std::isfinite(cfg_.t_end)) {
    throw std::invalid_argument("SolverConfig: t_end must be finite and >= 0");
  }
  if (cfg_.output_stride == 0) throw std::invalid_argument("SolverConfig: output_stride >= 1");
  if (!(cfg_.snapshot_interval >= 0.0)) {
    throw std::invalid_argument("SolverConfig: snapshot_interval must be >= 0");
  }
}

double NsSolver::stable_dt(const FieldState& s) const {
  const double gR = gas_.gamma() * gas_.R();
  const double diff = std::max(gas_.mu(), gas_.kappa() / gas_.c_nu());
  double cmax = 0.0;
  double dmax = 0.0;
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    cmax = std::max(cmax, std::sqrt(gR * s.theta[i]) / s.v[i]);
    dmax = std::max(dmax, diff / s.v[i]);
  }
  const double dx = s.grid.dx();
  return std::min(cfg_.cfl_hyperbolic * dx / cmax, cfg_.diff_number * dx * dx / dmax);
}

void NsSolver::rhs(const FieldState& s, std::vector<double>& dv, std::vector<double>& du,
                   std::vector<double>& dth) const {
  const std::size_t m = s.v.size();
  const double inv_dx = 1.0 / s.grid.dx();
  const double R = gas_.R();
  const double mu = gas_.mu();
  const double kappa = gas_.kappa();
  const double inv_cnu = 1.0 / gas_.c_nu();
  dv.assign(m, 0.0);
  du.assign(m, 0.0);
  dth.assign(m, 0.0);
  p_.resize(m);
  inv_v_.resize(m);
  sig_.resize(m - 1);
  q_.resize(m - 1);
  const double* v = s.v.data();
  const double* u = s.u.data();
  const double* th = s.theta.data();

  for (std::size_t i = 0; i < m; ++i) {
    inv_v_[i] = 1.0 / v[i];
    p_[i] = R * th[i] * inv_v_[i];
  }
  // Half-node fluxes mu u_x / v and kappa theta_x / v.
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double c = 2.0 * inv_dx / (v[i] + v[i + 1]);
    sig_[i] = mu * c * (u[i + 1] - u[i]);
    q_[i] = kappa * c * (th[i + 1] - th[i]);
  }
  const double half = 0.5 * inv_dx;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double ux = half * (u[i + 1] - u[i - 1]);
    dv[i] = ux;
    du[i] = -half * (p_[i + 1] - p_[i - 1]) + inv_dx * (sig_[i] - sig_[i - 1]);
    dth[i] = inv_cnu * (-p_[i] * ux + inv_dx * (q_[i] - q_[i - 1]) + mu * ux * ux * inv_v_[i]);
  }
}

void NsSolver::apply_boundary(FieldState& s, double t) const {
  const std::size_t last = s.v.size() - 1;
  if (cfg_.boundary_mode == BoundaryMode::pin_to_ansatz) {
    for (std::size_t i : {std::size_t{0}, last}) {
      const AnsatzSample a = ansatz_.evaluate(s.grid.x(i), t);
      s.v[i] = a.V;
      s.u[i] = a.U;
      s.theta[i] = a.Theta;
    }
    return;
  }
  for (auto* f : {&s.v, &s.u, &s.theta}) {
    auto& a = *f;
    a[0] = 2.0 * a[1] - a[2];
    a[last] = 2.0 * a[last - 1] - a[last - 2];
  }
}

void NsSolver::check_state(const FieldState& s, double dt) const {
  // Fast reduction first; the NaN-propagating sum catches non-finite values.
  double vmin = s.v[0], tmin = s.theta[0], sum = 0.0;
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    vmin = std::min(vmin, s.v[i]);
    tmin = std::min(tmin, s.theta[i]);
    sum += s.v[i] + s.u[i] + s.theta[i];
  }
  if (vmin > 0.0 && tmin > 0.0 && std::isfinite(sum)) return;
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    if (!std::isfinite(s.v[i]) || !std::isfinite(s.u[i]) || !std::isfinite(s.theta[i])) {
      std::ostringstream os;
      os << "non-finite value at node " << i << ", t = " << s.t;
      throw Error(ErrorCode::BlowUp, os.str());
    }
  }
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    if (!(s.v[i] > 0.0)) throw PositivityViolation(s.t, i, 'v', s.v[i], 0.5 * dt, "");
    if (!(s.theta[i] > 0.0)) throw PositivityViolation(s.t, i, 'T', s.theta[i], 0.5 * dt, "");
  }
}

void NsSolver::step(FieldState& s, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be positive");
  const std::size_t m = s.v.size();
  const double t0 = s.t;
  stage_ = s;
  auto& w = stage_;

  // Stage 1: w = s + dt L(s)
  rhs(s, k1v_, k1u_, k1t_);
  for (std::size_t i = 0; i < m; ++i) {
    w.v[i] = s.v[i] + dt * k1v_[i];
    w.u[i] = s.u[i] + dt * k1u_[i];
    w.theta[i] = s.theta[i] + dt * k1t_[i];
  }
  w.t = t0 + dt;
  apply_boundary(w, w.t);
  check_state(w, dt);

  // Stage 2: w = 3/4 s + 1/4 (w + dt L(w))
  rhs(w, k1v_, k1u_, k1t_);
  for (std::size_t i = 0; i < m; ++i) {
    w.v[i] = 0.75 * s.v[i] + 0.25 * (w.v[i] + dt * k1v_[i]);
    w.u[i] = 0.75 * s.u[i] + 0.25 * (w.u[i] + dt * k1u_[i]);
    w.theta[i] = 0.75 * s.theta[i] + 0.25 * (w.theta[i] + dt * k1t_[i]);
  }
  w.t = t0 + 0.5 * dt;
  apply_boundary(w, w.t);
  check_state(w, dt);

  // Stage 3: s = 1/3 s + 2/3 (w + dt L(w))
  rhs(w, k1v_, k1u_, k1t_);
  for (std::size_t i = 0; i < m; ++i) {
    s.v[i] = s.v[i] / 3.0 + 2.0 / 3.0 * (w.v[i] + dt * k1v_[i]);
    s.u[i] = s.u[i] / 3.0 + 2.0 / 3.0 * (w.u[i] + dt * k1u_[i]);
    s.theta[i] = s.theta[i] / 3.0 + 2.0 / 3.0 * (w.theta[i] + dt * k1t_[i]);
  }
  s.t = t0 + dt;
  apply_boundary(s, s.t);
  check_state(s, dt);
}

Trajectory NsSolver::run(FieldState s, const std::vector<Observer*>& observers) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  Trajectory traj;
  traj.min_v = *std::min_element(s.v.begin(), s.v.end());
  traj.min_theta = *std::min_element(s.theta.begin(), s.theta.end());
  traj.snapshots.push_back(s);
  for (Observer* o : observers) o->observe(s, 0);

  const double interval = cfg_.snapshot_interval;
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t snap_index = 1;
  auto next_snapshot = [&] { return interval > 0.0 ? interval * static_cast<double>(snap_index) : inf; };
  while (interval > 0.0 && next_snapshot() <= s.t) ++snap_index;

  std::size_t steps = 0;
  while (s.t < cfg_.t_end) {
    const double target = std::min(cfg_.t_end, next_snapshot());
    try {
      double dt = stable_dt(s);
      if (!(dt >= 1e-12)) {
        throw Error(ErrorCode::BlowUp, "time step " + std::to_string(dt) + " below 1e-12");
      }
      const bool hit = s.t + dt >= target;
      if (hit) dt = target - s.t;
      step(s, dt);
      if (hit) s.t = target;
    } catch (const PositivityViolation& e) {
      std::ostringstream os;
      os << "step " << steps + 1 << " after " << elapsed() << " s";
      throw PositivityViolation(e.time(), e.node(), e.field(), e.value(), e.suggested_dt(), os.str());
    } catch (const Error& e) {
      std::ostringstream os;
      os << "step " << steps + 1 << " after " << elapsed() << " s: " << e.what();
      throw Error(e.code(), os.str());
    }
    ++steps;
    traj.min_v = std::min(traj.min_v, *std::min_element(s.v.begin(), s.v.end()));
    traj.min_theta = std::min(traj.min_theta, *std::min_element(s.theta.begin(), s.theta.end()));
    const bool at_end = s.t >= cfg_.t_end;
    if (s.t == next_snapshot()) {
      traj.snapshots.push_back(s);
      ++snap_index;
    } else if (at_end) {
      traj.snapshots.push_back(s);
    }
    if (steps % cfg_.output_stride == 0 || at_end) {
      for (Observer* o : observers) o->observe(s, steps);
    }
  }
  traj.steps = steps;
  traj.wall_seconds = elapsed();
  return traj;
}

FieldState step(const GasParams& g, const FieldState& s, const SolverConfig& cfg,
                const AnsatzProfile& ansatz) {
  NsSolver solver(g, ansatz, cfg);
  FieldState out = s;
  double dt = solver.stable_dt(out);
  if (cfg.t_end > out.t) dt = std::min(dt, cfg.t_end - out.t);
  solver.step(out, dt);
  return out;
}

}  // namespace cwlab
