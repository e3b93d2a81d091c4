#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cwlab/composite_wave.hpp"
#include "cwlab/contact_profile.hpp"
#include "cwlab/errors.hpp"
#include "cwlab/ns_solver.hpp"
#include "cwlab/numerics.hpp"

using namespace cwlab;

namespace {
const GasParams kGas = GasParams::monatomic_unit();

const ContactWave& contact_01() {
  static const ContactWave w = ContactWave::from_ends(
      kGas, {ThermoState(1.0, 0.0, 1.0), ThermoState(1.1, 0.0, 1.1)}, {20.0, 4001, 1e-10});
  return w;
}

class ConstantState : public AnsatzProfile {
 public:
  AnsatzSample evaluate(double, double) const override { return {1.0, 0.0, 1.0, 0.0, 0.0, 0.0}; }
};

double sup_distance(const FieldState& s, const AnsatzProfile& a) {
  double d = 0.0;
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    const AnsatzSample q = a.evaluate(s.grid.x(i), s.t);
    d = std::max({d, std::abs(s.v[i] - q.V), std::abs(s.u[i] - q.U), std::abs(s.theta[i] - q.Theta)});
  }
  return d;
}

FieldState run_to(const AnsatzProfile& a, const PerturbationSpec& p, const Grid1D& grid, double T,
                  std::vector<Observer*> obs = {}) {
  SolverConfig cfg;
  cfg.t_end = T;
  cfg.output_stride = 1;
  NsSolver solver(kGas, a, cfg);
  return solver.run(initialize(kGas, a, p, grid), obs).snapshots.back();
}

// Boundary energy flux  -p u + mu u u_x / v + kappa theta_x / v  at both ends,
// integrated in time with the left rectangle rule.
class EnergyFlux : public Observer {
 public:
  void observe(const FieldState& s, std::size_t) override {
    if (have_) total += (s.t - t_prev_) * flux_;
    const std::size_t n = s.v.size() - 1;
    const double dx = s.grid.dx();
    auto at = [&](std::size_t i, std::size_t j, double sign) {
      const double ux = sign * (s.u[j] - s.u[i]) / dx;
      const double tx = sign * (s.theta[j] - s.theta[i]) / dx;
      const double p = kGas.R() * s.theta[i] / s.v[i];
      return -p * s.u[i] + kGas.mu() * s.u[i] * ux / s.v[i] + kGas.kappa() * tx / s.v[i];
    };
    flux_ = at(n, n - 1, -1.0) - at(0, 1, 1.0);
    t_prev_ = s.t;
    have_ = true;
  }
  double total = 0.0;

 private:
  bool have_ = false;
  double t_prev_ = 0.0, flux_ = 0.0;
};

double total_energy(const FieldState& s) {
  std::vector<double> e(s.v.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = kGas.c_nu() * s.theta[i] + 0.5 * s.u[i] * s.u[i];
  return trapezoid(e, s.grid.dx());
}
}  // namespace

TEST_SUITE("ns_solver") {
  TEST_CASE("initialization") {
    const Grid1D grid(-50.0, 50.0, 256);
    const FieldState s = initialize(kGas, contact_01(), {}, grid);
    CHECK(sup_distance(s, contact_01()) == 0.0);

    PerturbationSpec big;
    big.amp_phi = -1.5;
    try {
      initialize(kGas, contact_01(), big, grid);
      FAIL("expected PositivityViolation");
    } catch (const PositivityViolation& e) {
      CHECK(e.field() == 'v');
      CHECK(e.value() < 0.0);
    }

    PerturbationSpec wide;
    wide.width = 40.0;
    wide.amp_psi = 0.01;
    CHECK_THROWS_AS(sample_perturbation(wide, grid), std::invalid_argument);

    PerturbationSpec rf{PerturbationKind::random_fourier, 0.02, 0.02, 0.02, 5.0, 0.0, 42};
    const Perturbation a = sample_perturbation(rf, grid), b = sample_perturbation(rf, grid);
    CHECK(a.phi == b.phi);
    CHECK(a.psi == b.psi);
    CHECK(a.zeta == b.zeta);
    rf.seed = 43;
    CHECK(sample_perturbation(rf, grid).phi != a.phi);

    PerturbationSpec cc{PerturbationKind::compact_cosine, 0.0, 0.1, 0.0, 5.0, 2.0, 0};
    const Perturbation c = sample_perturbation(cc, grid);
    for (std::size_t i = 0; i < grid.nodes(); ++i) {
      if (std::abs(grid.x(i) - 2.0) >= 5.0) CHECK(c.psi[i] == 0.0);
    }
  }

  TEST_CASE("constant state is an exact equilibrium") {
    const ConstantState a;
    const Grid1D grid(-10.0, 10.0, 64);
    FieldState s = initialize(kGas, a, {}, grid);
    SolverConfig cfg;
    cfg.t_end = 1.0;
    NsSolver solver(kGas, a, cfg);
    for (double dt : {1e-4, 1e-3, 0.01}) {
      solver.step(s, dt);
      for (std::size_t i = 0; i < s.v.size(); ++i) {
        CHECK(s.v[i] == 1.0);
        CHECK(s.u[i] == 0.0);
        CHECK(s.theta[i] == 1.0);
      }
    }
  }

  TEST_CASE("t_end equal to the start time leaves only the initial record") {
    SolverConfig cfg;
    cfg.t_end = 0.0;
    NsSolver solver(kGas, contact_01(), cfg);
    const Trajectory tr = solver.run(initialize(kGas, contact_01(), {}, Grid1D(-50.0, 50.0, 128)));
    CHECK(tr.steps == 0);
    CHECK(tr.snapshots.size() == 1);
  }

  TEST_CASE("stable step respects both restrictions") {
    const Grid1D grid(-50.0, 50.0, 512);
    SolverConfig cfg;
    NsSolver solver(kGas, contact_01(), cfg);
    const FieldState s = initialize(kGas, contact_01(), {}, grid);
    double hyp = 0.0, visc = 0.0;
    for (std::size_t i = 0; i < s.v.size(); ++i) {
      hyp = std::max(hyp, std::sqrt(kGas.gamma() * kGas.R() * s.theta[i]) / s.v[i]);
      visc = std::max(visc, std::max(kGas.mu(), kGas.kappa() / kGas.c_nu()) / s.v[i]);
    }
    const double dx = grid.dx();
    const double expected =
        std::min(cfg.cfl_hyperbolic * dx / hyp, cfg.diff_number * dx * dx / visc);
    CHECK(solver.stable_dt(s) == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("drift from pure ansatz data follows the residual size") {
    // The contact wave misses the equations by R1, R2 only, so the solution
    // leaves the ansatz at a rate set by those residuals.
    const ContactWave& w = contact_01();
    double res = 0.0;
    for (double x = -50.0; x <= 50.0; x += 0.05) {
      const ContactResiduals r = w.residuals(x, 0.0);
      res = std::max({res, std::abs(r.R1), std::abs(r.R2)});
    }
    const double T = 0.5;
    std::vector<double> drift;
    for (std::size_t n : {1024u, 2048u}) {
      drift.push_back(sup_distance(run_to(w, {}, Grid1D(-50.0, 50.0, n), T), w));
    }
    MESSAGE("drift " << drift[0] << " " << drift[1] << ", residual*T " << res * T);
    CHECK(drift[1] <= 2.0 * res * T);
    CHECK(std::abs(drift[0] - drift[1]) <= 0.25 * drift[1]);
  }

  TEST_CASE("grid refinement: second-order convergence") {
    PerturbationSpec p;
    p.amp_psi = 0.05;
    std::vector<FieldState> out;
    for (std::size_t n : {256u, 512u, 1024u}) {
      out.push_back(run_to(contact_01(), p, Grid1D(-50.0, 50.0, n), 1.0));
    }
    auto dist = [](const FieldState& c, const FieldState& f) {
      std::vector<double> d(c.v.size());
      for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = std::pow(c.v[i] - f.v[2 * i], 2) + std::pow(c.u[i] - f.u[2 * i], 2) +
               std::pow(c.theta[i] - f.theta[2 * i], 2);
      }
      return std::sqrt(trapezoid(d, c.grid.dx()));
    };
    const double ratio = dist(out[0], out[1]) / dist(out[1], out[2]);
    MESSAGE("refinement ratio " << ratio);
    CHECK(ratio >= 3.6);
  }

  TEST_CASE("total energy changes only through the boundary flux") {
    PerturbationSpec p;
    p.amp_psi = 0.05;
    p.amp_zeta = 0.05;
    const Grid1D grid(-50.0, 50.0, 1024);
    const FieldState s0 = initialize(kGas, contact_01(), p, grid);
    EnergyFlux flux;
    const FieldState s1 = run_to(contact_01(), p, grid, 1.0, {&flux});
    const double E0 = total_energy(s0), E1 = total_energy(s1);
    MESSAGE("energy change " << E1 - E0 << ", boundary flux " << flux.total);
    CHECK(std::abs((E1 - E0) - flux.total) <= 1e-6 * E0);
  }

  TEST_CASE("identical runs give identical fields") {
    PerturbationSpec p{PerturbationKind::random_fourier, 0.02, 0.02, 0.02, 5.0, 0.0, 9};
    const Grid1D grid(-50.0, 50.0, 256);
    const FieldState a = run_to(contact_01(), p, grid, 0.5);
    const FieldState b = run_to(contact_01(), p, grid, 0.5);
    CHECK(a.v == b.v);
    CHECK(a.u == b.u);
    CHECK(a.theta == b.theta);
  }

  TEST_CASE("composite ansatz data drifts at the source-term size") {
    const ThermoState left(1.0, 0.0, 1.0);
    const double p_m = std::pow(1.05, -kGas.gamma());
    const EndStates ends =
        compose_r1cr3(kGas, left, p_m, p_m * 1.05 + 0.05, p_m * std::pow(1.05, kGas.gamma()));
    const CompositeAnsatz c = CompositeAnsatz::build(kGas, ends, {20.0, 4001, 1e-10});
    double src = 0.0;
    for (double x = -50.0; x <= 50.0; x += 0.05) {
      const SourceTerms st = c.source_terms(x, 0.0);
      src = std::max({src, std::abs(st.F), std::abs(st.G)});
    }
    const double T = 0.5;
    const double drift = sup_distance(run_to(c, {}, Grid1D(-50.0, 50.0, 2048), T), c);
    MESSAGE("composite drift " << drift << ", source*T " << src * T);
    CHECK(drift <= 2.0 * src * T);
  }
}
