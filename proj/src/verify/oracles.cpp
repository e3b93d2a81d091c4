#include "cwlab/verify/oracles.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <stdexcept>

namespace cwlab::oracle {

MarchedProfile march_self_similar(double b, double theta_minus, double theta_plus, double Xi,
                                  double h, double tau_end) {
  const auto n = static_cast<std::size_t>(std::llround(2.0 * Xi / h)) + 1;
  h = 2.0 * Xi / static_cast<double>(n - 1);
  MarchedProfile out;
  out.xi.resize(n);
  out.theta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.xi[i] = -Xi + h * static_cast<double>(i);
    out.theta[i] = out.xi[i] < 0.0 ? theta_minus : theta_plus;
  }
  out.theta[(n - 1) / 2] = 0.5 * (theta_minus + theta_plus);

  // Diffusion b / Theta and transport speed Xi / 2 bound the explicit step.
  const double tmin = std::min(theta_minus, theta_plus);
  const double dtau = 0.4 / (2.0 * b / (tmin * h * h) + 0.5 * Xi / h);
  std::vector<double> next = out.theta;
  double change = 0.0;
  for (double tau = 0.0; tau < tau_end; tau += dtau) {
    const auto& T = out.theta;
    change = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double adv = 0.25 * out.xi[i] * (T[i + 1] - T[i - 1]) / h;
      // (Theta_xi / Theta)_xi in flux form with face averages of Theta
      const double fr = (T[i + 1] - T[i]) / (0.5 * (T[i + 1] + T[i]));
      const double fl = (T[i] - T[i - 1]) / (0.5 * (T[i] + T[i - 1]));
      const double rate = adv + b * (fr - fl) / (h * h);
      next[i] = T[i] + dtau * rate;
      change = std::max(change, std::abs(rate));
    }
    std::swap(out.theta, next);
  }
  out.last_change = change;
  return out;
}

double phi_extended(double z) {
  using boost::multiprecision::cpp_bin_float_50;
  if (!(z > 0.0)) throw std::invalid_argument("phi_extended: z must be positive");
  const cpp_bin_float_50 Z(z);
  const cpp_bin_float_50 r = Z - log(Z) - 1;
  return r.convert_to<double>();
}

double burgers_bisect(double w_l, double w_r, double x, double t) {
  auto w0 = [&](double y) { return 0.5 * (w_r + w_l) + 0.5 * (w_r - w_l) * std::tanh(y); };
  double lo = x - w_r * t - 1.0;
  double hi = x - w_l * t + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid + w0(mid) * t > x) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return w0(0.5 * (lo + hi));
}

double rarefaction_u_quadrature(const GasParams& g, Family family, const ThermoState& anchor,
                                double v) {
  const double s = entropy(g, anchor);
  auto lam = [&](double eta) { return lambda(g, family, eta, s); };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(lam, anchor.v(), v, 10, 1e-12);
  return anchor.u() - integral;
}

ForwardRiemann construct_r1cr3(const GasParams& g, const ThermoState& left, double p_m,
                               double theta_m_plus, double p_right) {
  const double R = g.R();
  const double gm = g.gamma();
  const double p_left = R * left.theta() / left.v();
  const double vmm = left.v() * std::pow(p_left / p_m, 1.0 / gm);
  const double tmm = p_m * vmm / R;
  const double um = rarefaction_u_quadrature(g, Family::minus, left, vmm);
  const double vmp = R * theta_m_plus / p_m;
  const double vr = vmp * std::pow(p_m / p_right, 1.0 / gm);
  const double tr = p_right * vr / R;
  // u along the 3-curve from the right state: u_m = u_+ - int_{v_+}^{v_m+} lambda_+
  const ThermoState right_at_zero(vr, 0.0, tr);
  const double ur = um - rarefaction_u_quadrature(g, Family::plus, right_at_zero, vmp);
  ForwardRiemann f{{left, ThermoState(vr, ur, tr)}, {}};
  f.middle = {vmm, vmp, tmm, theta_m_plus, um, p_m, std::abs(tr - left.theta())};
  return f;
}

double q1_unfactored(const GasParams& g, double v, double theta, double V, double Theta) {
  const double R = g.R();
  const double gm = g.gamma();
  const double P = R * Theta / V;
  const double p = R * theta / v;
  const double phi = v - V;
  const double zeta = theta - Theta;
  return (gm - 1.0) * P * phi_extended(v / V) + P * phi * phi / (v * V) -
         P * phi_extended(Theta / theta) + zeta / theta * (p - P);
}

ForwardRiemann random_r1cr3(const GasParams& g, Draw& draw, double max_delta) {
  for (;;) {
    const ThermoState left(draw(0.6, 1.6), draw(-0.5, 0.5), draw(0.6, 1.6));
    const double pl = g.R() * left.theta() / left.v();
    const double p_m = pl * draw(0.75, 0.99);
    const double v_m = left.v() * std::pow(pl / p_m, 1.0 / g.gamma());
    const double theta_m_plus = p_m * v_m / g.R() + draw(-0.15, 0.15);
    const double p_r = p_m / draw(0.75, 0.99);
    ForwardRiemann f = construct_r1cr3(g, left, p_m, theta_m_plus, p_r);
    if (f.middle.delta <= max_delta) return f;
  }
}

double middle_error(const WaveDecomposition& a, const WaveDecomposition& b) {
  return std::max({std::abs(a.v_m_minus - b.v_m_minus), std::abs(a.v_m_plus - b.v_m_plus),
                   std::abs(a.theta_m_minus - b.theta_m_minus),
                   std::abs(a.theta_m_plus - b.theta_m_plus), std::abs(a.u_m - b.u_m),
                   std::abs(a.p_m - b.p_m)});
}

}  // namespace cwlab::oracle
