#include "cwlab/composite_wave.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cwlab/errors.hpp"
#include "cwlab/numerics.hpp"

namespace cwlab {

CompositeAnsatz::CompositeAnsatz(GasParams g, WaveDecomposition m, ContactWave c,
                                 RarefactionWave rm, RarefactionWave rp)
    : gas_(g),
      middles_(m),
      contact_(std::move(c)),
      rare_minus_(std::move(rm)),
      rare_plus_(std::move(rp)) {
  edge_minus_ = lambda(gas_, Family::minus, middles_.v_m_minus, rare_minus_.entropy_level());
  edge_plus_ = lambda(gas_, Family::plus, middles_.v_m_plus, rare_plus_.entropy_level());
}

CompositeAnsatz CompositeAnsatz::build(const GasParams& g, const EndStates& ends,
                                       const ProfileOptions& opts) {
  const WaveDecomposition m = solve_intermediate_states(g, ends, 1e-12);
  const double um = m.u_m;
  const ThermoState left = ends.left.with_u(ends.left.u() - um);
  const ThermoState right = ends.right.with_u(ends.right.u() - um);
  ContactWave contact(g, solve_self_similar(g, m.theta_m_minus, m.theta_m_plus, m.p_m, opts));
  RarefactionWave rm(g, Family::minus, left, m.v_m_minus);
  RarefactionWave rp(g, Family::plus, right, m.v_m_plus);
  return CompositeAnsatz(g, m, std::move(contact), std::move(rm), std::move(rp));
}

CompositeSample CompositeAnsatz::evaluate_full(double x, double t) const {
  if (t < 0.0) throw std::invalid_argument("CompositeAnsatz: t must be >= 0");
  CompositeSample s;
  s.contact = contact_.evaluate_full(x, t);
  s.minus = rare_minus_.evaluate_full(x, t);
  s.plus = rare_plus_.evaluate_full(x, t);
  const auto& c = s.contact;
  const auto& a = s.minus;
  const auto& b = s.plus;
  s.total.V = c.V + (a.V - middles_.v_m_minus) + (b.V - middles_.v_m_plus);
  s.total.U = c.U + a.U + b.U + middles_.u_m;
  s.total.Theta = c.Theta + (a.Theta - middles_.theta_m_minus) + (b.Theta - middles_.theta_m_plus);
  s.total.V_x = c.V_x + a.V_x + b.V_x;
  s.total.U_x = c.U_x + a.U_x + b.U_x;
  s.total.Theta_x = c.Theta_x + a.Theta_x + b.Theta_x;
  return s;
}

AnsatzSample CompositeAnsatz::evaluate(double x, double t) const {
  return evaluate_full(x, t).total;
}

SourceTerms CompositeAnsatz::source_terms(double x, double t) const {
  const double R = gas_.R();
  const double mu = gas_.mu();
  const double kappa = gas_.kappa();
  const double h = std::sqrt(1.0 + t) * 1e-4;

  // Analytic component values on the micro-stencil x + k h, k = -2..2.
  struct Local {
    double pressure_gap;  // P_- + P_+ - P
    double visc;          // mu U_x / V
    double heat_gap;      // Theta_x / V - Theta_x^cd / V^cd
  };
  auto local = [&](const CompositeSample& s) {
    const double P = R * s.total.Theta / s.total.V;
    const double Pm = R * s.minus.Theta / s.minus.V;
    const double Pp = R * s.plus.Theta / s.plus.V;
    return Local{Pm + Pp - P, mu * s.total.U_x / s.total.V,
                 s.total.Theta_x / s.total.V - s.contact.Theta_x / s.contact.V};
  };
  Local st[5];
  CompositeSample centre{};
  for (int k = -2; k <= 2; ++k) {
    const CompositeSample s = evaluate_full(x + k * h, t);
    st[k + 2] = local(s);
    if (k == 0) centre = s;
  }
  auto d = [&](double Local::*f) {
    return (st[0].*f - 8.0 * (st[1].*f) + 8.0 * (st[3].*f) - st[4].*f) / (12.0 * h);
  };

  const auto& s = centre;
  const double P = R * s.total.Theta / s.total.V;
  const double Pm = R * s.minus.Theta / s.minus.V;
  const double Pp = R * s.plus.Theta / s.plus.V;
  const double F = d(&Local::pressure_gap) + d(&Local::visc) - s.contact.U_t;
  const double G = (middles_.p_m - P) * s.contact.U_x + (Pm - P) * s.minus.U_x +
                   (Pp - P) * s.plus.U_x + mu * s.total.U_x * s.total.U_x / s.total.V +
                   kappa * d(&Local::heat_gap);
  return {F, G};
}

QTerms CompositeAnsatz::q_terms(const ThermoState& state, double x, double t) const {
  const CompositeSample s = evaluate_full(x, t);
  const double R = gas_.R();
  const double gm = gas_.gamma();
  const double V = s.total.V;
  const double Th = s.total.Theta;
  const double v = state.v();
  const double th = state.theta();
  const double P = R * Th / V;
  const double p = R * th / v;
  const double phi = v - V;
  const double zeta = th - Th;
  const double Pm = R * s.minus.Theta / s.minus.V;
  const double Pp = R * s.plus.Theta / s.plus.V;

  const double Q1 = P * (phi_kernel(th * V / (v * Th)) + gm * phi_kernel(v / V));

  const double pm = middles_.p_m;
  const double phi_vV = phi_kernel(v / V);
  const double phi_Tt = phi_kernel(Th / th);
  const double rare_bracket = phi_vV - phi_Tt / (gm - 1.0);
  const double Q2 =
      s.contact.U_x * (P * phi * phi / (v * V) - pm * phi_vV + pm / (gm - 1.0) * phi_Tt +
                       zeta / th * (p - P)) +
      (gm - 1.0) * (Pm - P) * s.minus.U_x * rare_bracket +
      (gm - 1.0) * (Pp - P) * s.plus.U_x * rare_bracket;
  return {Q1, Q2};
}

Region CompositeAnsatz::region(double x, double t) const {
  if (2.0 * x < edge_minus_ * t) return Region::minus;
  if (2.0 * x > edge_plus_ * t) return Region::plus;
  return Region::contact;
}

double CompositeAnsatz::rarefaction_strength() const {
  return std::max(std::abs(middles_.v_m_minus - rare_minus_.anchor().v()),
                  std::abs(middles_.v_m_plus - rare_plus_.anchor().v()));
}

double source_l1_norm(const CompositeAnsatz& c, double t, double x_min, double x_max,
                      std::size_t n) {
  if (n < 2 || !(x_max > x_min)) throw std::invalid_argument("source_l1_norm: bad grid");
  const double dx = (x_max - x_min) / static_cast<double>(n);
  std::vector<double> f(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const SourceTerms st = c.source_terms(x_min + dx * static_cast<double>(i), t);
    f[i] = std::abs(st.F) + std::abs(st.G);
  }
  return trapezoid(f, dx);
}

RegionDecay fit_region_decay(const CompositeAnsatz& c, std::span<const double> t_samples,
                             std::span<const double> x_samples) {
  const double delta = c.rarefaction_strength();
  if (delta == 0.0) throw Error(ErrorCode::DegenerateWave, "fit_region_decay: no rarefaction");
  const auto& m = c.middles();
  std::vector<double> r, q;
  for (double t : t_samples) {
    for (double x : x_samples) {
      if (c.region(x, t) != Region::contact) continue;
      const CompositeSample s = c.evaluate_full(x, t);
      double value = 0.0;
      for (const auto* w : {&s.minus, &s.plus}) {
        const bool left = (w == &s.minus);
        const double vm = left ? m.v_m_minus : m.v_m_plus;
        const double tm = left ? m.theta_m_minus : m.theta_m_plus;
        value += w->U_x + std::abs(w->V_x) + std::abs(w->V - vm) + std::abs(w->Theta_x) +
                 std::abs(w->Theta - tm);
      }
      r.push_back(std::abs(x) + t);
      q.push_back(value / delta);
    }
  }
  if (r.empty()) {
    throw Error(ErrorCode::InsufficientSamples, "fit_region_decay: no points in contact region");
  }
  constexpr double kCap = 4.0;
  // Points more than nine decades below the peak sit at rounding level.
  const double floor_q = 1e-9 * *std::max_element(q.begin(), q.end());
  const double c0 = fit_envelope_rate(r, q, kCap, floor_q);
  double K = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] >= floor_q) K = std::max(K, q[i] * std::exp(c0 * r[i]));
  }
  return {K, c0};
}

}  // namespace cwlab
