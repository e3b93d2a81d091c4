#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "cwlab/composite_wave.hpp"
#include "cwlab/contact_profile.hpp"
#include "cwlab/diagnostics.hpp"
#include "cwlab/experiment.hpp"
#include "cwlab/numerics.hpp"
#include "cwlab/rarefaction_profile.hpp"
#include "cwlab/verify/oracles.hpp"
#include "cwlab/verify/suite.hpp"
#include "timed.hpp"

namespace cwlab::verify {

namespace {

const GasParams kGas = GasParams::monatomic_unit();

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : "; ") + p;
  return s;
}

// --- 1 -------------------------------------------------------------------

Outcome contact_profile_correctness() {
  const auto start = std::chrono::steady_clock::now();
  const auto prof = solve_self_similar(kGas, 1.0, 1.2, 1.0, {20.0, 8001, 1e-10});
  const double solve_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const ContactWave w(kGas, prof);
  const auto ref = oracle::march_self_similar(prof.b_coeff, 1.0, 1.2, 20.0, 0.02, 40.0);
  double diff = 0.0;
  for (std::size_t i = 0; i < ref.xi.size(); ++i) {
    diff = std::max(diff, std::abs(w.at_xi(ref.xi[i]).theta - ref.theta[i]));
  }
  const bool ok = prof.ode_residual <= 1e-10 && prof.boundary_error <= 1e-8 && diff <= 1e-4 &&
                  solve_s <= 30.0;
  return {ok, join({fmt("ODE residual %.3g, boundary error %.3g", prof.ode_residual,
                        prof.boundary_error),
                    fmt("max |Theta - marched oracle| %.3g (oracle steady rate %.2g)", diff,
                        ref.last_change),
                    fmt("solve %.2f s", solve_s)})};
}

// --- 2 -------------------------------------------------------------------

// sup_x |f(x)| by a coarse scan followed by Brent refinement around the peak.
double sup_abs(const std::function<double(double)>& f, double lo, double hi) {
  const int n = 4000;
  double best_x = lo, best = -1.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double v = std::abs(f(x));
    if (v > best) best = v, best_x = x;
  }
  const double h = (hi - lo) / n;
  const auto r = boost::math::tools::brent_find_minima(
      [&](double x) { return -std::abs(f(x)); }, best_x - h, best_x + h,
      std::numeric_limits<double>::digits);
  return std::max(best, -r.second);
}

Outcome self_similar_scaling() {
  const ContactWave w(kGas, solve_self_similar(kGas, 1.0, 1.2, 1.0, {20.0, 8001, 1e-10}));
  std::vector<double> a, b;
  for (double t : {0.0, 3.0, 15.0, 99.0}) {
    const double L = 20.0 * std::sqrt(1.0 + t);
    a.push_back(std::sqrt(1.0 + t) *
                sup_abs([&](double x) { return w.evaluate_full(x, t).Theta_x; }, -L, L));
    b.push_back((1.0 + t) *
                sup_abs([&](double x) { return w.evaluate_full(x, t).Theta_xx; }, -L, L));
  }
  double da = 0.0, db = 0.0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    da = std::max(da, std::abs(a[i] / a[0] - 1.0));
    db = std::max(db, std::abs(b[i] / b[0] - 1.0));
  }
  return {da <= 1e-6 && db <= 1e-6,
          join({fmt("(1+t)^(1/2) sup|Theta_x| = %.10g, spread %.2g", a[0], da),
                fmt("(1+t) sup|Theta_xx| = %.10g, spread %.2g", b[0], db)})};
}

// --- 3 -------------------------------------------------------------------

struct ResidualShape {
  double c1;
  double K;
};

ResidualShape residual_shape(double delta) {
  const ContactWave w = ContactWave::from_ends(
      kGas, {ThermoState(1.0, 0.0, 1.0), ThermoState(1.0 + delta, 0.0, 1.0 + delta)});
  const double c1 = default_decay_constants(w)->c1;
  const std::vector<double> ts = {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0};
  std::vector<double> q, env;
  for (double t : ts) {
    for (int k = -1200; k <= 1200; ++k) {
      const double x = 0.01 * k * std::sqrt(1.0 + t);
      q.push_back(std::abs(w.residuals(x, t).R1) * std::pow(1.0 + t, 1.5) / delta);
      env.push_back(std::exp(-c1 * x * x / (1.0 + t)));
    }
  }
  // Values nine decades below the peak are rounding noise.
  const double floor_q = 1e-9 * *std::max_element(q.begin(), q.end());
  double K = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] >= floor_q) K = std::max(K, q[i] / env[i]);
  }
  return {c1, K};
}

Outcome residual_bound_shape() {
  const ResidualShape a = residual_shape(0.1);
  const ResidualShape b = residual_shape(0.2);
  const double rel = std::abs(b.K / a.K - 1.0);
  const bool ok = std::isfinite(a.K) && std::isfinite(b.K) && rel <= 0.2;
  return {ok, join({fmt("delta 0.1: c1 %.4g, constant %.4g", a.c1, a.K),
                    fmt("delta 0.2: c1 %.4g, constant %.4g", b.c1, b.K),
                    fmt("relative change %.3g", rel)})};
}

// --- 4 -------------------------------------------------------------------

Outcome burgers_rates() {
  const auto start = std::chrono::steady_clock::now();
  const BurgersWave b(0.5, 1.5);
  const std::vector<double> ps = {1.0, 2.0, std::numeric_limits<double>::infinity()};
  const std::vector<double> ts = log_space(10.0, 1000.0, 9);
  const LpRateTable table = lp_rate_report(b, ps, ts);
  double l1_drift = 0.0;
  for (const auto& row : table.rows) {
    if (row.p == 1.0) l1_drift = std::max(l1_drift, std::abs(row.norm - b.strength()));
  }
  const double s2 = table.slopes[1], sinf = table.slopes[2];
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = std::abs(s2 + 0.5) <= 0.1 && std::abs(sinf + 1.0) <= 0.1 && l1_drift <= 1e-12 &&
                  secs <= 10.0;
  return {ok, join({fmt("slope p=2: %.4f (expect -0.5), p=inf: %.4f (expect -1)", s2, sinf),
                    fmt("max |L1 - (w_r - w_l)| %.3g", l1_drift), fmt("%.2f s", secs)})};
}

// --- 5 -------------------------------------------------------------------

Outcome riemann_roundtrip() {
  oracle::Draw draw(20241016);
  double worst = 0.0, invariant = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto f = oracle::random_r1cr3(kGas, draw, 0.3);
    const WaveDecomposition m = solve_intermediate_states(kGas, f.ends);
    worst = std::max(worst, oracle::middle_error(m, f.middle));
    const double pm = pressure(kGas, m.middle_minus()), pp = pressure(kGas, m.middle_plus());
    invariant = std::max({invariant, std::abs(pm - m.p_m) / m.p_m, std::abs(pp - m.p_m) / m.p_m,
                          std::abs(entropy(kGas, m.middle_minus()) - entropy(kGas, f.ends.left)),
                          std::abs(entropy(kGas, m.middle_plus()) - entropy(kGas, f.ends.right))});
  }
  return {worst <= 1e-8 && invariant <= 1e-9,
          join({fmt("100 cases, max middle-state error %.3g", worst),
                fmt("max pressure/entropy mismatch %.3g", invariant)})};
}

// --- 6 -------------------------------------------------------------------

ExperimentConfig contact_config(double delta) {
  ExperimentConfig cfg;
  cfg.ends = {ThermoState(1.0, 0.0, 1.0), ThermoState(1.0 + delta, 0.0, 1.0 + delta)};
  cfg.ansatz_kind = AnsatzKind::contact;
  cfg.grid = Grid1D(-100.0, 100.0, 4096);
  cfg.perturbation = {PerturbationKind::gaussian_bump, 0.05, 0.05, 0.05, 5.0, 0.0, 0};
  cfg.solver.t_end = 200.0;
  cfg.solver.output_stride = 200;
  cfg.solver.snapshot_interval = 50.0;
  return cfg;
}

Outcome solver_convergence() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig cfg = contact_config(0.1);
  cfg.perturbation = {PerturbationKind::gaussian_bump, 0.0, 0.05, 0.0, 5.0, 0.0, 0};
  cfg.solver.t_end = 1.0;
  const ExperimentAnsatz ansatz(cfg);
  std::vector<FieldState> finals;
  for (std::size_t n : {1024u, 2048u, 4096u}) {
    const Grid1D grid(-100.0, 100.0, n);
    FieldState s = initialize(cfg.gas, ansatz.profile(), cfg.perturbation, grid);
    NsSolver solver(cfg.gas, ansatz.profile(), cfg.solver);
    finals.push_back(solver.run(std::move(s)).snapshots.back());
  }
  // L2 distance between a solution and the next finer one on the coarse nodes.
  auto distance = [](const FieldState& c, const FieldState& f) {
    std::vector<double> d(c.v.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double a = c.v[i] - f.v[2 * i], b = c.u[i] - f.u[2 * i], e = c.theta[i] - f.theta[2 * i];
      d[i] = a * a + b * b + e * e;
    }
    return std::sqrt(trapezoid(d, c.grid.dx()));
  };
  const double e1 = distance(finals[0], finals[1]);
  const double e2 = distance(finals[1], finals[2]);
  const double ratio = e1 / e2;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {ratio >= 3.6 && secs <= 300.0,
          join({fmt("L2 differences %.4g, %.4g", e1, e2),
                fmt("ratio %.3f (order %.2f)", ratio, std::log2(ratio)), fmt("%.1f s", secs)})};
}

// --- 7, 8 ----------------------------------------------------------------

struct DecayRun {
  SimulationResult result;
  double seconds;
};

const DecayRun& cached_run(const ExperimentConfig& cfg, const std::string& key) {
  static std::map<std::string, DecayRun> cache;
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const auto start = std::chrono::steady_clock::now();
  const ExperimentAnsatz ansatz(cfg);
  SimulationResult r = simulate(cfg, ansatz);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cache.emplace(key, DecayRun{std::move(r), secs}).first->second;
}

struct DecayChecks {
  bool ok;
  std::string detail;
};

DecayChecks decay_checks(const SimulationResult& r, double limit_s, double secs) {
  const auto& first = r.records.front();
  const auto& last = r.records.back();
  const auto& s0 = r.trajectory.snapshots.front();
  const double v0 = *std::min_element(s0.v.begin(), s0.v.end());
  const double t0 = *std::min_element(s0.theta.begin(), s0.theta.end());
  const bool halved = last.sup_perturbation <= 0.5 * first.sup_perturbation;
  const bool decaying = r.decay && r.decay->is_decaying;
  const bool bounds = r.trajectory.min_v >= 0.5 * v0 && r.trajectory.min_theta >= 0.5 * t0;
  return {halved && decaying && bounds && secs <= limit_s,
          join({fmt("sup|(phi,psi,zeta)| %.4g -> %.4g", first.sup_perturbation,
                    last.sup_perturbation),
                std::string("is_decaying ") + (decaying ? "true" : "false"),
                fmt("min v %.4g (initial %.4g)", r.trajectory.min_v, v0),
                fmt("min theta %.4g (initial %.4g)", r.trajectory.min_theta, t0),
                fmt("run %.1f s", secs)})};
}

Outcome contact_decay() {
  const DecayRun& run = cached_run(contact_config(0.1), "contact-0.1");
  const DecayChecks c = decay_checks(run.result, 1200.0, run.seconds);
  return {c.ok, c.detail};
}

struct MonitorCheck {
  bool ok;
  double worst;  // max over the run of the monitored functional minus C0
  double C0;
  double final_value;
};

MonitorCheck monitor_below_C0(const SimulationResult& r, bool use_D) {
  const double C0 = r.records.front().C0_ref;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& rec : r.records) worst = std::max(worst, (use_D ? rec.D_t : rec.G_t) - C0);
  const double fin = use_D ? r.records.back().D_t : r.records.back().G_t;
  return {worst <= 0.0, worst, C0, fin};
}

Outcome contact_G_monitor() {
  const DecayRun& run = cached_run(contact_config(0.1), "contact-0.1");
  const MonitorCheck m = monitor_below_C0(run.result, false);
  std::string detail = fmt("delta 0.1: G(T) %.4g, C0 %.4g", m.final_value, m.C0) +
                       fmt(", max G - C0 %.3g", m.worst);
  if (m.ok) return {true, detail};
  const DecayRun& retry = cached_run(contact_config(0.05), "contact-0.05");
  const MonitorCheck m2 = monitor_below_C0(retry.result, false);
  detail += "; exceeded, re-run at delta 0.05: " +
            fmt("G(T) %.4g, C0 %.4g", m2.final_value, m2.C0) + fmt(", max G - C0 %.3g", m2.worst);
  return {m2.ok, detail};
}

// --- 9 -------------------------------------------------------------------

// 1-rarefaction and 3-rarefaction each widening v by the factor (1 + r), and a
// contact jump d in temperature at the middle pressure.
EndStates composite_ends(double r, double d) {
  const ThermoState left(1.0, 0.0, 1.0);
  const double gm = kGas.gamma();
  const double p_m = pressure(kGas, left) * std::pow(1.0 + r, -gm);
  const double theta_m_minus = p_m * (1.0 + r) / kGas.R();
  return compose_r1cr3(kGas, left, p_m, theta_m_minus + d, p_m * std::pow(1.0 + r, gm));
}

ExperimentConfig composite_config(double r, double d) {
  ExperimentConfig cfg = contact_config(0.1);
  cfg.ends = composite_ends(r, d);
  cfg.ansatz_kind = AnsatzKind::composite;
  return cfg;
}

struct SourceBound {
  double constant;     // max over [0, T] of (1+t)^{7/8} ||(F,G)||_1
  double beyond;       // largest scaled value on (T, 10 T]
};

SourceBound source_bound(const CompositeAnsatz& c, double T) {
  auto scaled = [&](double t) {
    const double speed = std::max(std::abs(c.rare_minus().burgers().w_l()),
                                  std::abs(c.rare_plus().burgers().w_r()));
    const double L = 60.0 + 1.2 * speed * t;
    const auto n = static_cast<std::size_t>(L / 0.05);
    return std::pow(1.0 + t, 0.875) * source_l1_norm(c, t, -L, L, 2 * n);
  };
  SourceBound b{scaled(0.0), 0.0};
  for (double t : log_space(0.1, T, 16)) b.constant = std::max(b.constant, scaled(t));
  for (double t : log_space(2.0 * T, 10.0 * T, 4)) b.beyond = std::max(b.beyond, scaled(t));
  return b;
}

Outcome composite_decay() {
  const double r = 0.05, d = 0.05;
  const DecayRun& run = cached_run(composite_config(r, d), "composite-0.05");
  const DecayChecks c = decay_checks(run.result, 1800.0, run.seconds);
  std::vector<std::string> parts = {c.detail};
  const MonitorCheck m = monitor_below_C0(run.result, true);
  parts.push_back(fmt("strengths 0.05: D(T) %.4g, C0 %.4g", m.final_value, m.C0) +
                  fmt(", max D - C0 %.3g", m.worst));
  bool monitor_ok = m.ok;
  if (!m.ok) {
    const DecayRun& retry = cached_run(composite_config(0.5 * r, 0.5 * d), "composite-0.025");
    const MonitorCheck m2 = monitor_below_C0(retry.result, true);
    parts.push_back(fmt("exceeded, re-run at strengths 0.025: D(T) %.4g, C0 %.4g", m2.final_value,
                        m2.C0) +
                    fmt(", max D - C0 %.3g", m2.worst));
    monitor_ok = m2.ok;
  }
  const ExperimentConfig cfg = composite_config(r, d);
  const CompositeAnsatz comp = CompositeAnsatz::build(cfg.gas, cfg.ends, cfg.profile);
  const SourceBound sb = source_bound(comp, cfg.solver.t_end);
  const bool bounded = std::isfinite(sb.constant) && sb.beyond <= sb.constant;
  parts.push_back(fmt("(1+t)^(7/8) ||(F,G)||_1 <= %.4g on [0, T], %.4g max on [2T, 10T]",
                      sb.constant, sb.beyond));
  return {c.ok && monitor_ok && bounded, join(parts)};
}

// --- 10 ------------------------------------------------------------------

Outcome structural_suite() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Entry> props = run_properties(Level::fast);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<std::string> failed;
  for (const Entry& e : props) {
    if (!e.passed) failed.push_back(e.name);
  }
  std::string detail = fmt("%g properties, ", static_cast<double>(props.size())) +
                       fmt("%.1f s", secs);
  if (!failed.empty()) detail += "; failed: " + join(failed);
  return {failed.empty() && secs <= 60.0, detail};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {1, "acceptance_1_contact_profile", contact_profile_correctness},
    {2, "acceptance_2_self_similar_scaling", self_similar_scaling},
    {3, "acceptance_3_residual_bound_shape", residual_bound_shape},
    {4, "acceptance_4_burgers_rates", burgers_rates},
    {5, "acceptance_5_riemann_roundtrip", riemann_roundtrip},
    {6, "acceptance_6_solver_convergence", solver_convergence},
    {7, "acceptance_7_contact_decay", contact_decay},
    {8, "acceptance_8_G_below_C0", contact_G_monitor},
    {9, "acceptance_9_composite_decay", composite_decay},
    {10, "acceptance_10_structural_suite", structural_suite},
};

}  // namespace

std::vector<Entry> run_acceptance(const std::vector<int>& ids, std::ostream* log) {
  std::vector<Entry> out;
  for (const Criterion& c : kCriteria) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    out.push_back(timed(c.name, c.fn));
    if (log) {
      print_entries(*log, {out.back()});
      log->flush();
    }
  }
  return out;
}

}  // namespace cwlab::verify
