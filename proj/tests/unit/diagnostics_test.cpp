#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "cwlab/diagnostics.hpp"
#include "cwlab/errors.hpp"
#include "cwlab/experiment.hpp"
#include "cwlab/numerics.hpp"

using namespace cwlab;

namespace {
const GasParams kGas = GasParams::monatomic_unit();
const ProfileOptions kOpts{20.0, 4001, 1e-10};

const ContactWave& contact(double delta) {
  static std::map<double, ContactWave> cache;
  auto it = cache.find(delta);
  if (it == cache.end()) {
    it = cache.emplace(delta, ContactWave::from_ends(kGas, {ThermoState(1.0, 0.0, 1.0),
                                                            ThermoState(1.0 + delta, 0.0, 1.0 + delta)},
                                                     kOpts)).first;
  }
  return it->second;
}

CompositeAnsatz composite(double r, double d) {
  const double p_m = std::pow(1.0 + r, -kGas.gamma());
  const EndStates ends = compose_r1cr3(kGas, ThermoState(1.0, 0.0, 1.0), p_m,
                                       p_m * (1.0 + r) / kGas.R() + d,
                                       p_m * std::pow(1.0 + r, kGas.gamma()));
  return CompositeAnsatz::build(kGas, ends, kOpts);
}

PerturbationSpec bump(double amp) {
  PerturbationSpec p;
  p.amp_phi = p.amp_psi = p.amp_zeta = amp;
  return p;
}

std::vector<EnergyReport> observe_run(DiagnosticsObserver& obs, const AnsatzProfile& a,
                                      const PerturbationSpec& p, const Grid1D& grid, double T,
                                      std::size_t stride) {
  SolverConfig cfg;
  cfg.t_end = T;
  cfg.output_stride = stride;
  NsSolver solver(kGas, a, cfg);
  solver.run(initialize(kGas, a, p, grid), {&obs});
  return obs.records();
}
}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("relative entropy") {
    const Grid1D grid(-50.0, 50.0, 1024);
    const FieldState plain = initialize(kGas, contact(0.1), {}, grid);
    CHECK(relative_entropy_total(kGas, plain, contact(0.1)) == 0.0);

    // psi = A exp(-(x/w)^2) on a constant state: only the kinetic term survives
    const ContactWave& flat = contact(0.0);
    PerturbationSpec p;
    p.amp_psi = 0.2;
    p.width = 4.0;
    const double a = 0.5 * 0.2 * 0.2 * 4.0 * std::sqrt(std::numbers::pi / 2.0);
    CHECK(relative_entropy_total(kGas, initialize(kGas, flat, p, grid), flat) ==
          doctest::Approx(a).epsilon(1e-12));

    // generic perturbed contact against adaptive quadrature of the analytic data
    const PerturbationSpec q = bump(0.05);
    const FieldState s = initialize(kGas, contact(0.1), q, Grid1D(-50.0, 50.0, 4096));
    auto density = [&](double x) {
      const double e = std::exp(-x * x / 25.0);
      const AnsatzSample an = contact(0.1).evaluate(x, 0.0);
      return entropy_density(kGas, an.V + 0.05 * e, an.U + 0.05 * e, an.Theta + 0.05 * e, an);
    };
    const double ref =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, -50.0, 50.0, 20, 1e-13);
    CHECK(relative_entropy_total(kGas, s, contact(0.1)) == doctest::Approx(ref).epsilon(1e-8));
  }

  TEST_CASE("G and D vanish without perturbation on trivial waves") {
    const Grid1D grid(-20.0, 20.0, 256);
    EnergyReport g_rep, d_rep;
    accumulate_G(g_rep, kGas, initialize(kGas, contact(0.0), {}, grid), contact(0.0), 1.0);
    CHECK(g_rep.G_t == 0.0);
    const CompositeAnsatz flat = composite(0.0, 0.0);
    accumulate_D(d_rep, kGas, initialize(kGas, flat, {}, grid), flat, 1.0);
    CHECK(d_rep.D_t == 0.0);
  }

  TEST_CASE("left-rectangle accumulation is first order in the observation interval") {
    std::vector<double> G;
    for (std::size_t stride : {4u, 8u, 16u}) {
      DiagnosticsObserver obs(kGas, contact(0.1), std::nullopt);
      G.push_back(observe_run(obs, contact(0.1), bump(0.05), Grid1D(-50.0, 50.0, 512), 0.5, stride)
                      .back()
                      .G_t);
    }
    const double ratio = (G[2] - G[1]) / (G[1] - G[0]);
    MESSAGE("halving ratio " << ratio);
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.2));
  }

  TEST_CASE("source group of D reduces to the residual group of G on a pure contact") {
    const EndStates ends{ThermoState(1.0, 0.0, 1.0), ThermoState(1.1, 0.0, 1.1)};
    const CompositeAnsatz c = CompositeAnsatz::build(kGas, ends, kOpts);
    FieldState s = initialize(kGas, contact(0.1), bump(0.05), Grid1D(-50.0, 50.0, 2048));
    s.t = 2.0;
    EnergyReport g_rep, d_rep;
    accumulate_G(g_rep, kGas, s, contact(0.1), 1.0);
    accumulate_D(d_rep, kGas, s, c, 1.0);
    CHECK(d_rep.D_groups[2] == doctest::Approx(g_rep.G_groups[2]).epsilon(1e-6));
  }

  TEST_CASE("small-delta contact run: G stays below C0") {
    DiagnosticsObserver obs(kGas, contact(0.05), std::nullopt);
    const auto rec = observe_run(obs, contact(0.05), bump(0.05), Grid1D(-100.0, 100.0, 1024), 50.0, 50);
    for (const auto& r : rec) CHECK(r.G_t <= r.C0_ref);
    CHECK(obs.density_nonnegative());
    CHECK(obs.omega2_bounded());
  }

  TEST_CASE("small-delta composite run: D stays below C0") {
    const CompositeAnsatz c = composite(0.005, 0.005);
    DiagnosticsObserver obs(kGas, c, std::nullopt);
    const auto rec = observe_run(obs, c, bump(0.05), Grid1D(-100.0, 100.0, 1024), 50.0, 50);
    MESSAGE("D(T) " << rec.back().D_t << ", C0 " << rec.front().C0_ref);
    for (const auto& r : rec) CHECK(r.D_t <= r.C0_ref);
  }

  TEST_CASE("weight kernel") {
    const WeightKernel k(0.15);
    CHECK(k.g(-1e3, 1.0) == doctest::Approx(0.0));
    CHECK(k.g(1e3, 1.0) == doctest::Approx(k.g_infinity()).epsilon(1e-15));
    for (double t : {0.0, 4.0, 50.0}) {
      auto w2 = [&](double x) { return k.w(x, t) * k.w(x, t); };
      const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          w2, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 15,
          1e-14);
      CHECK(q == doctest::Approx(k.w2_integral(t)).epsilon(1e-10));
      // g' = w
      CHECK(central_derivative([&](double x) { return k.g(x, t); }, 0.7, 1e-3) ==
            doctest::Approx(k.w(0.7, t)).epsilon(1e-9));
    }
    EnergyReport rep;
    weighted_square_integral(rep, initialize(kGas, contact(0.1), {}, Grid1D(-50.0, 50.0, 256)),
                             contact(0.1), k, 1.0);
    CHECK(rep.weighted_lhs == 0.0);
    CHECK(rep.weighted_rhs == 0.0);
    CHECK(rep.weighted_ratio == 0.0);
  }

  TEST_CASE("weighted ratio stays bounded along a perturbed contact run") {
    const WeightKernel k(default_decay_constants(contact(0.1))->alpha);
    DiagnosticsObserver obs(kGas, contact(0.1), k);
    const auto rec = observe_run(obs, contact(0.1), bump(0.05), Grid1D(-100.0, 100.0, 1024), 100.0, 100);
    double first_half = 0.0, second_half = 0.0;
    for (const auto& r : rec) {
      double& m = r.t <= 50.0 ? first_half : second_half;
      m = std::max(m, r.weighted_ratio);
    }
    MESSAGE("weighted ratio max " << first_half << " then " << second_half);
    CHECK(std::isfinite(second_half));
    CHECK(second_half <= 2.0 * first_half);
  }

  TEST_CASE("decay fit") {
    std::vector<double> t, flat, ex;
    for (int i = 0; i < 50; ++i) {
      t.push_back(2.0 * i);
      flat.push_back(0.3);
      ex.push_back(std::exp(-t.back() / 20.0));
    }
    CHECK_FALSE(decay_fit(t, flat).is_decaying);
    const DecayFit f = decay_fit(t, ex);
    CHECK(f.is_decaying);
    CHECK(f.half_life == doctest::Approx(20.0 * std::numbers::ln2).epsilon(0.01));
    try {
      decay_fit(std::vector<double>(t.begin(), t.begin() + 5), std::vector<double>(ex.begin(), ex.begin() + 5));
      FAIL("expected InsufficientSamples");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InsufficientSamples);
    }
  }

  TEST_CASE("region measures and entropy levels") {
    const Grid1D grid(-50.0, 50.0, 1000);
    FieldState s = initialize(kGas, contact(0.0), {}, grid);
    CHECK(omega_measure(s, contact(0.0), 2.0) == 0.0);
    for (std::size_t i = 0; i < 10; ++i) s.theta[500 + i] = 3.0;
    CHECK(omega_measure(s, contact(0.0), 2.0) == doctest::Approx(10 * grid.dx()));
    CHECK(omega2_bound(kGas, 1.0, 1.0) ==
          doctest::Approx(3.0 / (1.0 - std::log(2.0)) / kGas.c_nu()));
    CHECK(sigma_tilde(0.3) == 0.3);
    CHECK(sigma_tilde(7.0) == 1.0);
    const auto [a1, a2] = entropy_level_roots(kGas, 0.01, 1.0);
    const double level = std::min(3 * 0.01 / kGas.R(), 3 * 0.01 / kGas.c_nu());
    CHECK(a1 < 1.0);
    CHECK(a2 > 1.0);
    CHECK(phi_kernel(a1) == doctest::Approx(level).epsilon(1e-10));
    CHECK(phi_kernel(a2) == doctest::Approx(level).epsilon(1e-10));
  }
}
