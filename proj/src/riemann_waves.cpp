#include "cwlab/riemann_waves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cwlab/errors.hpp"

namespace cwlab {

bool is_contact_compatible(const GasParams& g, const EndStates& ends, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("is_contact_compatible: tol must be positive");
  const double pl = pressure(g, ends.left);
  const double pr = pressure(g, ends.right);
  return std::abs(ends.right.u() - ends.left.u()) <= tol &&
         std::abs(pr - pl) <= tol * std::max(pl, pr);
}

double rarefaction_u_along_curve(const GasParams& g, Family family, const ThermoState& anchor,
                                 double v) {
  if (!(v > 0.0)) throw std::invalid_argument("rarefaction_u_along_curve: v must be positive");
  if (v == anchor.v()) return anchor.u();
  // lambda(eta) = +-sqrt(gamma R theta_a) v_a^{(gamma-1)/2} eta^{-(gamma+1)/2}
  const double gm1 = g.gamma() - 1.0;
  const double c_a = sound_speed(g, anchor.theta());
  const double ratio_term = 1.0 - std::pow(v / anchor.v(), -0.5 * gm1);
  const double integral = family_sign(family) * (2.0 / gm1) * c_a * ratio_term;
  return anchor.u() - integral;
}

ThermoState isentrope_state_at_pressure(const GasParams& g, Family family,
                                        const ThermoState& anchor, double p) {
  const double pa = pressure(g, anchor);
  const double v = anchor.v() * std::pow(pa / p, 1.0 / g.gamma());
  const double theta = p * v / g.R();
  return {v, rarefaction_u_along_curve(g, family, anchor, v), theta};
}

namespace {

constexpr double kExpansionSlack = 1e-12;

}  // namespace

WaveDecomposition solve_intermediate_states(const GasParams& g, const EndStates& ends,
                                            double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_intermediate_states: tol must be positive");
  const ThermoState& L = ends.left;
  const ThermoState& Rs = ends.right;
  const double delta = std::abs(Rs.theta() - L.theta());

  if (is_contact_compatible(g, ends, tol)) {
    return {L.v(), Rs.v(), L.theta(), Rs.theta(), 0.5 * (L.u() + Rs.u()), pressure(g, L), delta};
  }

  // u_R(p) - u_L(p) is increasing in p; the admissible root lies in (0, min(p-, p+)].
  auto mismatch = [&](double p) {
    const double uL = isentrope_state_at_pressure(g, Family::minus, L, p).u();
    const double uR = isentrope_state_at_pressure(g, Family::plus, Rs, p).u();
    return uR - uL;
  };
  const double p_hi = std::min(pressure(g, L), pressure(g, Rs));
  const double f_hi = mismatch(p_hi);
  if (f_hi < -tol) {
    throw Error(ErrorCode::NoIntersection,
                "wave curves meet only with compression (velocity mismatch " +
                    std::to_string(f_hi) + " at p = min(p-, p+)); state pair outside R1CR3");
  }
  const double gm1 = g.gamma() - 1.0;
  const double vacuum_gap =
      Rs.u() - L.u() - (2.0 / gm1) * (sound_speed(g, L.theta()) + sound_speed(g, Rs.theta()));
  if (vacuum_gap >= 0.0) {
    throw Error(ErrorCode::NoIntersection, "rarefaction curves do not meet (vacuum forms)");
  }

  double lo = 0.0;
  double hi = p_hi;
  double p_m = p_hi;
  if (std::abs(f_hi) > tol) {
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (mismatch(mid) > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    p_m = 0.5 * (lo + hi);
  }

  const ThermoState mm = isentrope_state_at_pressure(g, Family::minus, L, p_m);
  const ThermoState mp = isentrope_state_at_pressure(g, Family::plus, Rs, p_m);
  const double residual = std::abs(mp.u() - mm.u());
  if (residual > tol * std::max(1.0, std::abs(mm.u()))) {
    throw Error(ErrorCode::ConvergenceFailure,
                "velocity residual " + std::to_string(residual) + " above tolerance");
  }
  if (mm.v() < L.v() * (1.0 - kExpansionSlack) || mp.v() < Rs.v() * (1.0 - kExpansionSlack)) {
    throw Error(ErrorCode::NoIntersection, "intermediate volume below end volume");
  }
  return {mm.v(), mp.v(), mm.theta(), mp.theta(), 0.5 * (mm.u() + mp.u()), p_m, delta};
}

EndStates compose_r1cr3(const GasParams& g, const ThermoState& left, double p_m,
                        double theta_m_plus, double p_right) {
  const double pl = pressure(g, left);
  if (!(p_m > 0.0 && p_m <= pl && p_right >= p_m && theta_m_plus > 0.0)) {
    throw std::invalid_argument("compose_r1cr3: need 0 < p_m <= p_left, p_right >= p_m");
  }
  const ThermoState mm = isentrope_state_at_pressure(g, Family::minus, left, p_m);
  const ThermoState mp(g.R() * theta_m_plus / p_m, mm.u(), theta_m_plus);
  // The 3-curve through the right state also passes through mp.
  const ThermoState right = isentrope_state_at_pressure(g, Family::plus, mp, p_right);
  return {left, right};
}

ThermoState exact_rarefaction_fan(const GasParams& g, Family family, const ThermoState& head,
                                  const ThermoState& tail, double xi) {
  const double s_head = entropy(g, head);
  const double s_tail = entropy(g, tail);
  if (std::abs(s_head - s_tail) > 1e-8) {
    throw std::invalid_argument("exact_rarefaction_fan: head and tail not on one isentrope");
  }
  const double lam_head = lambda(g, family, head.v(), s_head);
  const double lam_tail = lambda(g, family, tail.v(), s_head);
  if (lam_head > lam_tail) {
    throw std::invalid_argument("exact_rarefaction_fan: lambda must increase from head to tail");
  }
  if (xi <= lam_head) return head;
  if (xi >= lam_tail) return tail;
  // lambda^2 = A gamma v^{-gamma-1} e^{(gamma-1)s/R}
  const double gm = g.gamma();
  const double k = g.A() * gm * std::exp((gm - 1.0) * s_head / g.R());
  const double v = std::pow(k / (xi * xi), 1.0 / (gm + 1.0));
  const double theta = temperature_on_isentrope(g, v, s_head);
  return {v, rarefaction_u_along_curve(g, family, head, v), theta};
}

}  // namespace cwlab
