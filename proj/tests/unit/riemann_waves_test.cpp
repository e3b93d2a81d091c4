#include <doctest.h>

#include <cmath>

#include "cwlab/errors.hpp"
#include "cwlab/riemann_waves.hpp"
#include "cwlab/verify/oracles.hpp"

using namespace cwlab;

namespace {
const GasParams kGas = GasParams::monatomic_unit();

// Volume on the isentrope `s` where lambda_family equals xi, by bisection.
double volume_for_speed(Family f, double s, double xi) {
  double lo = 1e-3, hi = 1e3;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    // |lambda| decreases in v
    (std::abs(lambda(kGas, f, mid, s)) > std::abs(xi) ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}
}  // namespace

TEST_SUITE("riemann_waves") {
  TEST_CASE("contact compatibility") {
    const ThermoState left(1.0, 0.0, 1.0);
    CHECK(is_contact_compatible(kGas, {left, ThermoState(1.2, 0.0, 1.2)}, 1e-10));
    CHECK_FALSE(is_contact_compatible(kGas, {left, ThermoState(1.0, 0.5, 1.0)}, 1e-10));
    CHECK_FALSE(is_contact_compatible(kGas, {left, ThermoState(1.1, 0.0, 1.0)}, 1e-10));
  }

  TEST_CASE("velocity along rarefaction curves") {
    const ThermoState anchor(1.0, 0.0, 1.0);
    CHECK(rarefaction_u_along_curve(kGas, Family::plus, anchor, 1.0) == 0.0);
    const double closed = rarefaction_u_along_curve(kGas, Family::plus, anchor, 2.0);
    CHECK(closed == doctest::Approx(oracle::rarefaction_u_quadrature(kGas, Family::plus, anchor, 2.0))
                        .epsilon(1e-10));
    CHECK(rarefaction_u_along_curve(kGas, Family::minus, anchor, 1.5) >= anchor.u());
  }

  TEST_CASE("contact-compatible ends give zero-strength rarefactions") {
    const EndStates ends{ThermoState(1.0, 0.3, 1.0), ThermoState(1.2, 0.3, 1.2)};
    const WaveDecomposition m = solve_intermediate_states(kGas, ends);
    CHECK(m.v_m_minus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.v_m_plus == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(m.theta_m_minus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.theta_m_plus == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(m.u_m == doctest::Approx(0.3).epsilon(1e-12));
  }

  TEST_CASE("walk 0.05 along each curve from a common middle and invert") {
    const ThermoState left(1.0, 0.0, 1.0);
    const double s_l = entropy(kGas, left);
    const double vmm = 1.05;
    const double tmm = temperature_on_isentrope(kGas, vmm, s_l);
    const double um = oracle::rarefaction_u_quadrature(kGas, Family::minus, left, vmm);
    const double pm = pressure(kGas, vmm, tmm);
    const double vmp = 1.35;
    const double tmp = pm * vmp / kGas.R();
    const ThermoState mid_plus(vmp, um, tmp);
    const double vr = 1.3;
    const double tr = temperature_on_isentrope(kGas, vr, entropy(kGas, mid_plus));
    const double ur = oracle::rarefaction_u_quadrature(kGas, Family::plus, mid_plus, vr);
    const WaveDecomposition m =
        solve_intermediate_states(kGas, {left, ThermoState(vr, ur, tr)});
    CHECK(std::abs(m.v_m_minus - vmm) <= 1e-9);
    CHECK(std::abs(m.v_m_plus - vmp) <= 1e-9);
    CHECK(std::abs(m.theta_m_minus - tmm) <= 1e-9);
    CHECK(std::abs(m.theta_m_plus - tmp) <= 1e-9);
    CHECK(std::abs(m.u_m - um) <= 1e-9);
    CHECK(std::abs(m.p_m - pm) <= 1e-9);
  }

  TEST_CASE("compressive data has no rarefaction intersection") {
    const ThermoState left(1.0, 0.0, 1.0), right(0.5, -1.0, 1.5);
    // Oracle scan: along the admissible branches (p below both end pressures)
    // u on the 1-curve minus u on the 3-curve keeps one sign.
    const double pl = pressure(kGas, left), pr = pressure(kGas, right);
    double sign = 0.0;
    bool crosses = false;
    for (int k = 1; k < 400; ++k) {
      const double p = std::min(pl, pr) * k / 400.0;
      const double v1 = left.v() * std::pow(pl / p, 1.0 / kGas.gamma());
      const double v3 = right.v() * std::pow(pr / p, 1.0 / kGas.gamma());
      const double u1 = oracle::rarefaction_u_quadrature(kGas, Family::minus, left, v1);
      const double u3 = oracle::rarefaction_u_quadrature(kGas, Family::plus, right, v3);
      const double d = std::copysign(1.0, u1 - u3);
      if (sign != 0.0 && d != sign) crosses = true;
      sign = d;
    }
    CHECK_FALSE(crosses);
    try {
      solve_intermediate_states(kGas, {left, right});
      FAIL("expected NoIntersection");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoIntersection);
    }
  }

  TEST_CASE("exact centred fan") {
    const ThermoState head(1.0, 0.0, 1.0);
    const double s = entropy(kGas, head);
    const double vt = 1.2;
    const ThermoState tail(vt, rarefaction_u_along_curve(kGas, Family::minus, head, vt),
                           temperature_on_isentrope(kGas, vt, s));
    const double lh = lambda(kGas, Family::minus, head.v(), s);
    const double lt = lambda(kGas, Family::minus, tail.v(), s);
    CHECK(exact_rarefaction_fan(kGas, Family::minus, head, tail, lh - 1.0) == head);
    CHECK(exact_rarefaction_fan(kGas, Family::minus, head, tail, lt + 1.0) == tail);
    const double xi = 0.5 * (lh + lt);
    const ThermoState mid = exact_rarefaction_fan(kGas, Family::minus, head, tail, xi);
    CHECK(std::abs(lambda(kGas, Family::minus, mid.v(), s) - xi) <= 1e-10);
    CHECK(mid.v() == doctest::Approx(volume_for_speed(Family::minus, s, xi)).epsilon(1e-10));
  }

  TEST_CASE("property: randomized round trips recover the middle states") {
    oracle::Draw draw(7);
    for (int k = 0; k < 50; ++k) {
      const auto f = oracle::random_r1cr3(kGas, draw, 0.3);
      const WaveDecomposition m = solve_intermediate_states(kGas, f.ends);
      CHECK(oracle::middle_error(m, f.middle) <= 1e-8);
      CHECK(pressure(kGas, m.middle_minus()) == doctest::Approx(m.p_m).epsilon(1e-9));
      CHECK(pressure(kGas, m.middle_plus()) == doctest::Approx(m.p_m).epsilon(1e-9));
      CHECK(std::abs(entropy(kGas, m.middle_minus()) - entropy(kGas, f.ends.left)) <= 1e-9);
      CHECK(std::abs(entropy(kGas, m.middle_plus()) - entropy(kGas, f.ends.right)) <= 1e-9);
    }
  }
}
