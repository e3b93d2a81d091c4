#pragma once

#include "cwlab/gas_thermo.hpp"

namespace cwlab {

struct EndStates {
  ThermoState left;
  ThermoState right;

  bool operator==(const EndStates&) const = default;
};

/// Riemann skeleton of a 1-rarefaction / contact / 3-rarefaction solution.
struct WaveDecomposition {
  double v_m_minus;
  double v_m_plus;
  double theta_m_minus;
  double theta_m_plus;
  double u_m;
  double p_m;
  double delta;  ///< |theta_+ - theta_-| of the end states

  ThermoState middle_minus() const { return {v_m_minus, u_m, theta_m_minus}; }
  ThermoState middle_plus() const { return {v_m_plus, u_m, theta_m_plus}; }
};

/// |u+ - u-| <= tol and |p+ - p-| <= tol * max(p-, p+).
bool is_contact_compatible(const GasParams& g, const EndStates& ends, double tol);

/// u_anchor - int_{v_anchor}^{v} lambda_family(eta, s_anchor) d eta, in closed form.
double rarefaction_u_along_curve(const GasParams& g, Family family, const ThermoState& anchor,
                                 double v);

/// Point on the isentrope through `anchor` with pressure p, reached along the
/// `family` rarefaction curve.
ThermoState isentrope_state_at_pressure(const GasParams& g, Family family,
                                        const ThermoState& anchor, double p);

/// Intersects the 1-rarefaction curve of `ends.left` with the 3-rarefaction
/// curve of `ends.right`. Throws Error{NoIntersection} when the curves do not
/// meet with v_m >= v on both sides, Error{ConvergenceFailure} when the
/// velocity residual cannot be brought below tol.
WaveDecomposition solve_intermediate_states(const GasParams& g, const EndStates& ends,
                                            double tol = 1e-12);

/// Forward construction: left state, middle pressure p_m < p_left, contact
/// temperature theta_m_plus, right pressure p_right > p_m.
EndStates compose_r1cr3(const GasParams& g, const ThermoState& left, double p_m,
                        double theta_m_plus, double p_right);

/// Self-similar centred fan at xi = x/t between head and tail states lying on
/// one isentrope. Throws std::invalid_argument when entropies differ by more
/// than 1e-8 or lambda(head) > lambda(tail).
ThermoState exact_rarefaction_fan(const GasParams& g, Family family, const ThermoState& head,
                                  const ThermoState& tail, double xi);

}  // namespace cwlab
