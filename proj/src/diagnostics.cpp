#include "cwlab/diagnostics.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cwlab/errors.hpp"
#include "cwlab/numerics.hpp"

namespace cwlab {

WeightKernel::WeightKernel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("WeightKernel: alpha must be positive");
  }
}

double WeightKernel::w(double x, double t) const {
  return std::exp(-alpha_ * x * x / (1.0 + t)) / std::sqrt(1.0 + t);
}

double WeightKernel::g(double x, double t) const {
  // int_{-inf}^x w dy = (1/2) sqrt(pi/alpha) erfc(-x sqrt(alpha/(1+t)))
  return 0.5 * g_infinity() * std::erfc(-x * std::sqrt(alpha_ / (1.0 + t)));
}

double WeightKernel::g_infinity() const { return std::sqrt(std::numbers::pi / alpha_); }

double WeightKernel::w2_integral(double t) const {
  return std::sqrt(std::numbers::pi / (2.0 * alpha_)) / std::sqrt(1.0 + t);
}

double entropy_density(const GasParams& g, double v, double u, double theta,
                       const AnsatzSample& a) {
  const double psi = u - a.U;
  return 0.5 * psi * psi + g.R() * a.Theta * phi_kernel(v / a.V) +
         g.c_nu() * a.Theta * phi_kernel(theta / a.Theta);
}

double relative_entropy_total(const GasParams& g, const FieldState& field,
                              const AnsatzProfile& ansatz) {
  std::vector<double> f(field.v.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const AnsatzSample a = ansatz.evaluate(field.grid.x(i), field.t);
    f[i] = entropy_density(g, field.v[i], field.u[i], field.theta[i], a);
  }
  return trapezoid(f, field.grid.dx());
}

void accumulate_G(EnergyReport& running, const GasParams& g, const FieldState& field,
                  const ContactWave& contact, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("accumulate_G: dt must be positive");
  const std::size_t m = field.v.size();
  const double mu = g.mu();
  const double kappa = g.kappa();
  const double R = g.R();
  const double pp = contact.profile().p_plus;
  const double gm1 = std::abs(g.gamma() - 1.0);
  std::vector<double> f1(m), f2(m), f3(m);
  for (std::size_t i = 0; i < m; ++i) {
    const ContactSample c = contact.evaluate_full(field.grid.x(i), field.t);
    const ContactResiduals res = contact.residuals(field.grid.x(i), field.t);
    const double v = field.v[i];
    const double th = field.theta[i];
    const double phi = v - c.V;
    const double psi = field.u[i] - c.U;
    const double zeta = th - c.Theta;
    const double Tx2 = c.Theta_x * c.Theta_x;
    const double Ux2 = c.U_x * c.U_x;
    const double vth2 = v * th * th;
    f1[i] = kappa * zeta * zeta * Tx2 / (vth2 * c.Theta) +
            kappa * c.Theta * phi * phi * Tx2 / (vth2 * c.V * c.V) +
            kappa * std::abs(zeta * phi) * Tx2 / (vth2 * c.V) +
            4.0 * mu * zeta * zeta * Ux2 / (v * th * c.Theta) +
            mu * std::abs(zeta * phi) * Ux2 / (v * th * c.V) +
            mu * th * phi * phi * Ux2 / (v * c.Theta * c.V * c.V);
    const double p = R * th / v;
    f2[i] = (pp * phi_kernel(c.V / v) + pp / gm1 * phi_kernel(c.Theta / th) +
             std::abs(zeta) / th * std::abs(pp - p)) *
            std::abs(c.U_x);
    f3[i] = std::abs(psi * res.R1) + std::abs(zeta / th * res.R2);
  }
  const double dx = field.grid.dx();
  const double add[3] = {trapezoid(f1, dx) * dt, trapezoid(f2, dx) * dt, trapezoid(f3, dx) * dt};
  for (int k = 0; k < 3; ++k) {
    running.G_groups[k] += add[k];
    running.G_t += add[k];
  }
}

void accumulate_D(EnergyReport& running, const GasParams& g, const FieldState& field,
                  const CompositeAnsatz& composite, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("accumulate_D: dt must be positive");
  const std::size_t m = field.v.size();
  const double mu = g.mu();
  const double kappa = g.kappa();
  std::vector<double> f1(m), f2(m), f3(m), f4(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = field.grid.x(i);
    const AnsatzSample a = composite.evaluate(x, field.t);
    const double v = field.v[i];
    const double th = field.theta[i];
    const double phi = v - a.V;
    const double psi = field.u[i] - a.U;
    const double zeta = th - a.Theta;
    const double vth2 = v * th * th;
    f1[i] = (kappa * zeta * zeta / (vth2 * a.Theta) + kappa * a.Theta * phi * phi / (vth2 * a.V * a.V) +
             kappa * std::abs(phi * zeta) / (vth2 * a.V)) *
            a.Theta_x * a.Theta_x;
    f2[i] = (mu * th * phi * phi / (v * th * a.V * a.V) + 4.0 * mu * zeta * zeta / (v * th * a.Theta) +
             mu * std::abs(phi * zeta) / (v * th * a.V)) *
            a.U_x * a.U_x;
    const SourceTerms st = composite.source_terms(x, field.t);
    f3[i] = std::abs(st.F * psi) + std::abs(st.G * zeta / th);
    f4[i] = std::abs(composite.q_terms(ThermoState(v, field.u[i], th), x, field.t).Q2);
  }
  const double dx = field.grid.dx();
  const double add[4] = {trapezoid(f1, dx) * dt, trapezoid(f2, dx) * dt, trapezoid(f3, dx) * dt,
                         trapezoid(f4, dx) * dt};
  for (int k = 0; k < 4; ++k) {
    running.D_groups[k] += add[k];
    running.D_t += add[k];
  }
}

namespace {

struct PerturbationFields {
  std::vector<double> phi, psi, zeta;
};

PerturbationFields perturbation(const FieldState& field, const AnsatzProfile& ansatz) {
  const std::size_t m = field.v.size();
  PerturbationFields p{std::vector<double>(m), std::vector<double>(m), std::vector<double>(m)};
  for (std::size_t i = 0; i < m; ++i) {
    const AnsatzSample a = ansatz.evaluate(field.grid.x(i), field.t);
    p.phi[i] = field.v[i] - a.V;
    p.psi[i] = field.u[i] - a.U;
    p.zeta[i] = field.theta[i] - a.Theta;
  }
  return p;
}

// Central differences inside, one-sided at the two ends.
std::vector<double> grid_derivative(const std::vector<double>& f, double dx) {
  const std::size_t m = f.size();
  std::vector<double> d(m);
  for (std::size_t i = 1; i + 1 < m; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
  d[0] = (f[1] - f[0]) / dx;
  d[m - 1] = (f[m - 1] - f[m - 2]) / dx;
  return d;
}

double gradient_square_integral(const PerturbationFields& p, double dx) {
  const auto a = grid_derivative(p.phi, dx);
  const auto b = grid_derivative(p.psi, dx);
  const auto c = grid_derivative(p.zeta, dx);
  std::vector<double> f(a.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = a[i] * a[i] + b[i] * b[i] + c[i] * c[i];
  return trapezoid(f, dx);
}

}  // namespace

void weighted_square_integral(EnergyReport& running, const FieldState& field,
                              const AnsatzProfile& ansatz, const WeightKernel& kernel, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("weighted_square_integral: dt must be positive");
  const PerturbationFields p = perturbation(field, ansatz);
  const double dx = field.grid.dx();
  std::vector<double> f(p.phi.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = kernel.w(field.grid.x(i), field.t);
    f[i] = (p.phi[i] * p.phi[i] + p.psi[i] * p.psi[i] + p.zeta[i] * p.zeta[i]) * w * w;
  }
  running.weighted_lhs += trapezoid(f, dx) * dt;
  running.weighted_rhs += gradient_square_integral(p, dx) * dt;
  running.weighted_ratio = running.weighted_lhs / (1.0 + running.weighted_rhs);
}

PerturbationNorms perturbation_norms(const FieldState& field, const AnsatzProfile& ansatz) {
  const PerturbationFields p = perturbation(field, ansatz);
  const double dx = field.grid.dx();
  double sup = 0.0;
  std::vector<double> f(p.phi.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    sup = std::max({sup, std::abs(p.phi[i]), std::abs(p.psi[i]), std::abs(p.zeta[i])});
    f[i] = p.phi[i] * p.phi[i] + p.psi[i] * p.psi[i] + p.zeta[i] * p.zeta[i];
  }
  const double l2sq = trapezoid(f, dx);
  const double h1sq = l2sq + gradient_square_integral(p, dx);
  return {sup, std::sqrt(l2sq), std::sqrt(h1sq)};
}

double omega_measure(const FieldState& field, const AnsatzProfile& ansatz, double a) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < field.theta.size(); ++i) {
    if (field.theta[i] / ansatz.evaluate(field.grid.x(i), field.t).Theta > a) ++count;
  }
  return static_cast<double>(count) * field.grid.dx();
}

double omega2_bound(const GasParams& g, double entropy, double theta_min) {
  return 3.0 / (1.0 - std::numbers::ln2) * entropy / (g.c_nu() * theta_min);
}

double sigma_tilde(double t) { return std::min(t, 1.0); }

std::pair<double, double> entropy_level_roots(const GasParams& g, double C0, double theta_minus) {
  if (!(C0 >= 0.0) || !(theta_minus > 0.0)) {
    throw std::invalid_argument("entropy_level_roots: need C0 >= 0, theta_- > 0");
  }
  const double level =
      std::min(3.0 * C0 / (g.R() * theta_minus), 3.0 * C0 / (g.c_nu() * theta_minus));
  if (level == 0.0) return {1.0, 1.0};
  auto f = [&](double y) { return phi_kernel(y) - level; };
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);

  double lo = 0.5;
  while (f(lo) <= 0.0) lo *= 0.5;
  std::uintmax_t iters = 200;
  auto r1 = boost::math::tools::toms748_solve(f, lo, 1.0, f(lo), -level, tol, iters);

  double hi = 2.0;
  while (f(hi) <= 0.0) hi *= 2.0;
  iters = 200;
  auto r2 = boost::math::tools::toms748_solve(f, 1.0, hi, -level, f(hi), tol, iters);
  return {0.5 * (r1.first + r1.second), 0.5 * (r2.first + r2.second)};
}

DecayFit decay_fit(std::span<const double> t, std::span<const double> sup) {
  if (t.size() != sup.size()) throw std::invalid_argument("decay_fit: size mismatch");
  const std::size_t n = t.size();
  if (n < 10 || (1.0 + t.back()) < 10.0 * (1.0 + t.front())) {
    throw Error(ErrorCode::InsufficientSamples,
                "decay_fit: need >= 10 samples spanning a decade in 1 + t");
  }
  const std::size_t early_n = std::max<std::size_t>(1, (n + 9) / 10);
  const double early = *std::max_element(sup.begin(), sup.begin() + static_cast<long>(early_n));
  const double tail = *std::max_element(sup.begin() + static_cast<long>(n / 2), sup.end());
  const bool decaying = tail < 0.5 * early;

  std::vector<double> ts, ls;
  for (std::size_t i = 0; i < n; ++i) {
    if (sup[i] > 0.0) {
      ts.push_back(t[i]);
      ls.push_back(std::log(sup[i]));
    }
  }
  double half_life = std::numeric_limits<double>::infinity();
  if (ts.size() >= 2) {
    const double k = fit_line(ts, ls).slope;
    if (k < 0.0) half_life = std::numbers::ln2 / -k;
  }
  return {decaying, half_life};
}

DiagnosticsObserver::DiagnosticsObserver(GasParams g, const ContactWave& contact,
                                         std::optional<WeightKernel> kernel)
    : gas_(g), contact_(&contact), kernel_(kernel) {
  theta_min_ = std::min(contact.profile().theta_minus, contact.profile().theta_plus);
}

DiagnosticsObserver::DiagnosticsObserver(GasParams g, const CompositeAnsatz& composite,
                                         std::optional<WeightKernel> kernel)
    : gas_(g), composite_(&composite), kernel_(kernel) {
  const auto& m = composite.middles();
  theta_min_ = std::min({composite.rare_minus().anchor().theta(),
                         composite.rare_plus().anchor().theta(), m.theta_m_minus,
                         m.theta_m_plus});
}

const AnsatzProfile& DiagnosticsObserver::ansatz() const {
  if (contact_ != nullptr) return *contact_;
  return *composite_;
}

void DiagnosticsObserver::observe(const FieldState& state, std::size_t) {
  if (prev_) {
    const double dt = state.t - prev_->t;
    if (dt > 0.0) {
      if (contact_ != nullptr) accumulate_G(running_, gas_, *prev_, *contact_, dt);
      if (composite_ != nullptr) accumulate_D(running_, gas_, *prev_, *composite_, dt);
      if (kernel_) weighted_square_integral(running_, *prev_, ansatz(), *kernel_, dt);
    }
  }
  const AnsatzProfile& a = ansatz();
  double total = 0.0;
  {
    std::vector<double> f(state.v.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      const AnsatzSample s = a.evaluate(state.grid.x(i), state.t);
      f[i] = entropy_density(gas_, state.v[i], state.u[i], state.theta[i], s);
      if (f[i] < 0.0) density_ok_ = false;
    }
    total = trapezoid(f, state.grid.dx());
  }
  if (!prev_) running_.C0_ref = total;
  running_.t = state.t;
  running_.entropy_total = total;
  const PerturbationNorms norms = perturbation_norms(state, a);
  running_.sup_perturbation = norms.sup;
  running_.l2_perturbation = norms.l2;
  running_.h1_perturbation = norms.h1;
  running_.omega2_measure = omega_measure(state, a, 2.0);
  if (running_.omega2_measure > omega2_bound(gas_, total, theta_min_)) omega2_ok_ = false;
  running_.sigma_tilde = sigma_tilde(state.t);
  records_.push_back(running_);
  prev_ = state;
}

}  // namespace cwlab
