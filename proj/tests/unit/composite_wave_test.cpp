#include <doctest.h>

#include <cmath>
#include <vector>

#include "cwlab/composite_wave.hpp"
#include "cwlab/errors.hpp"
#include "cwlab/numerics.hpp"
#include "cwlab/verify/oracles.hpp"

using namespace cwlab;

namespace {
const GasParams kGas = GasParams::monatomic_unit();
const ProfileOptions kOpts{20.0, 4001, 1e-10};

// Rarefactions widening v by (1 + r) each side, contact jump d at the middle pressure.
EndStates ends_for(double r, double d) {
  const ThermoState left(1.0, 0.0, 1.0);
  const double p_m = std::pow(1.0 + r, -kGas.gamma());
  return compose_r1cr3(kGas, left, p_m, p_m * (1.0 + r) / kGas.R() + d,
                       p_m * std::pow(1.0 + r, kGas.gamma()));
}
}  // namespace

TEST_SUITE("composite_wave") {
  TEST_CASE("contact-only composite equals the contact wave") {
    const EndStates ends{ThermoState(1.0, 0.2, 1.0), ThermoState(1.2, 0.2, 1.2)};
    const CompositeAnsatz c = CompositeAnsatz::build(kGas, ends, kOpts);
    const ContactWave w = ContactWave::from_ends(kGas, ends, kOpts);
    for (double t : {0.0, 2.0, 30.0}) {
      for (double x : {-40.0, -3.0, 0.0, 0.4, 9.0}) {
        const AnsatzSample a = c.evaluate(x, t), b = w.evaluate(x, t);
        CHECK(a.V == doctest::Approx(b.V).epsilon(1e-14));
        CHECK(a.U == doctest::Approx(b.U).epsilon(1e-14));
        CHECK(a.Theta == doctest::Approx(b.Theta).epsilon(1e-14));
        // sources reduce to the contact residuals F = -R1, G = -R2, up to the
        // finite-difference floor on the interpolated profile
        const SourceTerms st = c.source_terms(x, t);
        const ContactResiduals r = w.residuals(x, t);
        CHECK(std::abs(st.F + r.R1) <= 1e-6);
        CHECK(std::abs(st.G + r.R2) <= 1e-6);
      }
    }
  }

  TEST_CASE("zero-strength contact: two rarefactions minus one constant") {
    const EndStates ends = ends_for(0.05, 0.0);
    const CompositeAnsatz c = CompositeAnsatz::build(kGas, ends, kOpts);
    const auto& m = c.middles();
    CHECK(m.theta_m_minus == doctest::Approx(m.theta_m_plus).epsilon(1e-12));
    for (double x : {-30.0, -12.0, 0.0, 12.0}) {
      const CompositeSample s = c.evaluate_full(x, 10.0);
      CHECK(s.total.V == doctest::Approx(s.minus.V + s.plus.V - m.v_m_minus).epsilon(1e-12));
      CHECK(s.total.Theta ==
            doctest::Approx(s.minus.Theta + s.plus.Theta - m.theta_m_minus).epsilon(1e-12));
    }
  }

  TEST_CASE("generic composite against independently built components") {
    const EndStates ends = ends_for(0.05, 0.05);
    const CompositeAnsatz c = CompositeAnsatz::build(kGas, ends, kOpts);
    const WaveDecomposition m = solve_intermediate_states(kGas, ends);
    const RarefactionWave rm(kGas, Family::minus, ends.left, m.v_m_minus);
    const RarefactionWave rp(kGas, Family::plus, ends.right, m.v_m_plus);
    const ContactWave cw(kGas, solve_self_similar(kGas, m.theta_m_minus, m.theta_m_plus, m.p_m, kOpts));
    const double x = 0.0, t = 1.0;
    const double V = rm.evaluate(x, t).V + cw.evaluate(x, t).V + rp.evaluate(x, t).V -
                     m.v_m_minus - m.v_m_plus;
    const double Th = rm.evaluate(x, t).Theta + cw.evaluate(x, t).Theta +
                      rp.evaluate(x, t).Theta - m.theta_m_minus - m.theta_m_plus;
    CHECK(c.evaluate(x, t).V == doctest::Approx(V).epsilon(1e-13));
    CHECK(c.evaluate(x, t).Theta == doctest::Approx(Th).epsilon(1e-13));
    // far fields
    const AnsatzSample far_l = c.evaluate(-400.0, 1.0), far_r = c.evaluate(400.0, 1.0);
    CHECK(far_l.V == doctest::Approx(ends.left.v()).epsilon(1e-12));
    CHECK(far_l.U == doctest::Approx(ends.left.u()).epsilon(1e-12));
    CHECK(far_r.V == doctest::Approx(ends.right.v()).epsilon(1e-12));
    CHECK(far_r.U == doctest::Approx(ends.right.u()).epsilon(1e-12));
    CHECK(far_r.Theta == doctest::Approx(ends.right.theta()).epsilon(1e-12));
  }

  TEST_CASE("source L1 norm at t = 0 against the delta^{1/8} scale") {
    // The constant measured at the larger strength bounds the smaller one.
    std::vector<double> scaled;
    for (double r : {0.05, 0.0125}) {
      const CompositeAnsatz c = CompositeAnsatz::build(kGas, ends_for(r, r), kOpts);
      const double n = source_l1_norm(c, 0.0, -60.0, 60.0, 4800);
      CHECK(std::isfinite(n));
      scaled.push_back(n / std::pow(c.rarefaction_strength(), 0.125));
    }
    MESSAGE("||(F,G)(0)||_1 / delta^(1/8): " << scaled[0] << ", " << scaled[1]);
    CHECK(scaled[1] <= scaled[0]);
  }

  TEST_CASE("(1+t)^{7/8} ||(F,G)||_1 stays bounded on [0, 100]") {
    const CompositeAnsatz c = CompositeAnsatz::build(kGas, ends_for(0.05, 0.05), kOpts);
    double K = 0.0;
    for (double t : log_space(1.0, 101.0, 8)) {
      const double tt = t - 1.0;
      const double L = 60.0 + 1.5 * tt;
      K = std::max(K, std::pow(1.0 + tt, 0.875) *
                          source_l1_norm(c, tt, -L, L, static_cast<std::size_t>(40.0 * L)));
    }
    MESSAGE("bound constant " << K);
    CHECK(std::isfinite(K));
    CHECK(K < 10.0);
  }

  TEST_CASE("Q1 vanishes on the ansatz, is nonnegative, and both printed forms agree") {
    const CompositeAnsatz c = CompositeAnsatz::build(kGas, ends_for(0.05, 0.05), kOpts);
    const AnsatzSample a = c.evaluate(0.3, 2.0);
    CHECK(c.q_terms(ThermoState(a.V, a.U, a.Theta), 0.3, 2.0).Q1 == 0.0);
    oracle::Draw draw(3);
    for (int k = 0; k < 500; ++k) {
      const double x = draw(-30.0, 30.0), t = draw(0.0, 20.0);
      const AnsatzSample s = c.evaluate(x, t);
      const double v = s.V * draw(0.5, 1.5), th = s.Theta * draw(0.5, 1.5);
      const double q1 = c.q_terms(ThermoState(v, 0.0, th), x, t).Q1;
      CHECK(q1 >= 0.0);
      CHECK(std::abs(q1 - oracle::q1_unfactored(kGas, v, th, s.V, s.Theta)) <= 1e-10);
    }
  }

  TEST_CASE("region split and exponential decay of the rarefactions inside the contact region") {
    const CompositeAnsatz c = CompositeAnsatz::build(kGas, ends_for(0.05, 0.05), kOpts);
    CHECK(c.region(-100.0, 10.0) == Region::minus);
    CHECK(c.region(0.0, 10.0) == Region::contact);
    CHECK(c.region(100.0, 10.0) == Region::plus);
    std::vector<double> ts = {1, 5, 10, 20, 40}, xs;
    for (double x = -40.0; x <= 40.0; x += 0.5) xs.push_back(x);
    const RegionDecay d = fit_region_decay(c, ts, xs);
    CHECK(d.c0 > 0.0);
    CHECK(std::isfinite(d.K));
    const CompositeAnsatz flat = CompositeAnsatz::build(
        kGas, {ThermoState(1.0, 0.0, 1.0), ThermoState(1.2, 0.0, 1.2)}, kOpts);
    try {
      fit_region_decay(flat, ts, xs);
      FAIL("expected DegenerateWave");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateWave);
    }
  }
}
