#include "cwlab/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <set>
#include <sstream>

#include "cwlab/csv.hpp"
#include "cwlab/errors.hpp"
#include "cwlab/numerics.hpp"

namespace cwlab {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

// Collects every problem in the document before failing.
class Reader {
 public:
  void fail(const std::string& path, const std::string& msg) { errors_.push_back(path + ": " + msg); }

  bool object(const json& j, const std::string& path, std::set<std::string> allowed) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (const auto& [k, _] : j.items()) {
      if (!allowed.count(k)) fail(path.empty() ? k : path + "." + k, "unknown key");
    }
    return true;
  }

  template <class T>
  void number(const json& j, const std::string& key, const std::string& path, T& out,
              bool required = false) {
    const std::string where = path.empty() ? key : path + "." + key;
    if (!j.contains(key)) {
      if (required) fail(where, "missing");
      return;
    }
    const json& v = j.at(key);
    if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) return fail(where, "expected a number");
      out = v.get<double>();
    } else {
      if (!v.is_number_unsigned()) return fail(where, "expected a non-negative integer");
      out = v.get<T>();
    }
  }

  void text(const json& j, const std::string& key, const std::string& path, std::string& out,
            bool required = false) {
    const std::string where = path.empty() ? key : path + "." + key;
    if (!j.contains(key)) {
      if (required) fail(where, "missing");
      return;
    }
    if (!j.at(key).is_string()) return fail(where, "expected a string");
    out = j.at(key).get<std::string>();
  }

  // Runs `build`, turning argument errors into field messages.
  void guard(const std::string& path, const std::function<void()>& build) {
    try {
      build();
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }

  void finish() const {
    if (errors_.empty()) return;
    std::string msg;
    for (const auto& e : errors_) msg += (msg.empty() ? "" : "; ") + e;
    throw Error(ErrorCode::ConfigInvalid, msg);
  }

 private:
  std::vector<std::string> errors_;
};

const char* name(AnsatzKind k) { return k == AnsatzKind::contact ? "contact" : "composite"; }

const char* name(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::gaussian_bump: return "gaussian_bump";
    case PerturbationKind::compact_cosine: return "compact_cosine";
    case PerturbationKind::random_fourier: return "random_fourier";
  }
  return "";
}

const char* name(BoundaryMode b) {
  return b == BoundaryMode::pin_to_ansatz ? "pin_to_ansatz" : "extrapolate";
}

ojson state_json(const ThermoState& s) { return {{"v", s.v()}, {"u", s.u()}, {"theta", s.theta()}}; }

ojson config_json(const ExperimentConfig& c) {
  ojson j;
  j["gas"] = {{"R", c.gas.R()}, {"gamma", c.gas.gamma()}, {"mu", c.gas.mu()},
              {"kappa", c.gas.kappa()}, {"A", c.gas.A()}};
  j["ends"] = {{"left", state_json(c.ends.left)}, {"right", state_json(c.ends.right)}};
  j["ansatz_kind"] = name(c.ansatz_kind);
  j["profile"] = {{"Xi", c.profile.Xi}, {"n_points", c.profile.n_points}, {"tol", c.profile.tol}};
  const auto& p = c.perturbation;
  j["perturbation"] = {{"kind", name(p.kind)},   {"amp_phi", p.amp_phi}, {"amp_psi", p.amp_psi},
                       {"amp_zeta", p.amp_zeta}, {"width", p.width},     {"center", p.center},
                       {"seed", p.seed}};
  j["grid"] = {{"x_min", c.grid.x_min()}, {"x_max", c.grid.x_max()}, {"n", c.grid.n()}};
  const auto& s = c.solver;
  j["solver"] = {{"cfl_hyperbolic", s.cfl_hyperbolic},
                 {"diff_number", s.diff_number},
                 {"t_end", s.t_end},
                 {"boundary_mode", name(s.boundary_mode)},
                 {"snapshot_interval", s.snapshot_interval}};
  j["observer_stride"] = s.output_stride;
  j["output_dir"] = c.output_dir;
  return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("malformed JSON: ") + e.what());
  }
  Reader rd;
  ExperimentConfig cfg;
  if (!rd.object(j, "", {"gas", "ends", "ansatz_kind", "profile", "perturbation", "grid",
                         "solver", "observer_stride", "output_dir"})) {
    rd.finish();
  }

  if (j.contains("gas") && rd.object(j["gas"], "gas", {"R", "gamma", "mu", "kappa", "A"})) {
    const json& g = j["gas"];
    double R = 1, gm = 5.0 / 3.0, mu = 1, kappa = 1, A = 1;
    rd.number(g, "R", "gas", R, true);
    rd.number(g, "gamma", "gas", gm, true);
    rd.number(g, "mu", "gas", mu, true);
    rd.number(g, "kappa", "gas", kappa, true);
    rd.number(g, "A", "gas", A);
    rd.guard("gas", [&] { cfg.gas = GasParams(R, gm, mu, kappa, A); });
  } else if (!j.contains("gas")) {
    rd.fail("gas", "missing");
  }

  auto read_state = [&](const json& e, const std::string& path, ThermoState& out) {
    if (!rd.object(e, path, {"v", "u", "theta"})) return;
    double v = 1, u = 0, th = 1;
    rd.number(e, "v", path, v, true);
    rd.number(e, "u", path, u, true);
    rd.number(e, "theta", path, th, true);
    rd.guard(path, [&] { out = ThermoState(v, u, th); });
  };
  if (!j.contains("ends")) {
    rd.fail("ends", "missing");
  } else if (rd.object(j["ends"], "ends", {"left", "right"})) {
    for (const char* side : {"left", "right"}) {
      const std::string path = std::string("ends.") + side;
      if (!j["ends"].contains(side)) {
        rd.fail(path, "missing");
        continue;
      }
      read_state(j["ends"][side], path, side[0] == 'l' ? cfg.ends.left : cfg.ends.right);
    }
  }

  std::string kind = "contact";
  rd.text(j, "ansatz_kind", "", kind, true);
  if (kind == "contact") {
    cfg.ansatz_kind = AnsatzKind::contact;
  } else if (kind == "composite") {
    cfg.ansatz_kind = AnsatzKind::composite;
  } else {
    rd.fail("ansatz_kind", "expected \"contact\" or \"composite\"");
  }

  if (j.contains("profile") && rd.object(j["profile"], "profile", {"Xi", "n_points", "tol"})) {
    const json& p = j["profile"];
    rd.number(p, "Xi", "profile", cfg.profile.Xi);
    unsigned n_points = static_cast<unsigned>(cfg.profile.n_points);
    rd.number(p, "n_points", "profile", n_points);
    cfg.profile.n_points = static_cast<int>(n_points);
    rd.number(p, "tol", "profile", cfg.profile.tol);
    if (!(cfg.profile.Xi > 0.0)) rd.fail("profile.Xi", "must be positive");
    if (cfg.profile.n_points < 1001) rd.fail("profile.n_points", "must be >= 1001");
    if (!(cfg.profile.tol > 0.0)) rd.fail("profile.tol", "must be positive");
  }

  if (j.contains("perturbation") &&
      rd.object(j["perturbation"], "perturbation",
                {"kind", "amp_phi", "amp_psi", "amp_zeta", "width", "center", "seed"})) {
    const json& p = j["perturbation"];
    auto& ps = cfg.perturbation;
    std::string pk = name(ps.kind);
    rd.text(p, "kind", "perturbation", pk);
    if (pk == "gaussian_bump") {
      ps.kind = PerturbationKind::gaussian_bump;
    } else if (pk == "compact_cosine") {
      ps.kind = PerturbationKind::compact_cosine;
    } else if (pk == "random_fourier") {
      ps.kind = PerturbationKind::random_fourier;
    } else {
      rd.fail("perturbation.kind", "expected gaussian_bump, compact_cosine or random_fourier");
    }
    rd.number(p, "amp_phi", "perturbation", ps.amp_phi);
    rd.number(p, "amp_psi", "perturbation", ps.amp_psi);
    rd.number(p, "amp_zeta", "perturbation", ps.amp_zeta);
    rd.number(p, "width", "perturbation", ps.width);
    rd.number(p, "center", "perturbation", ps.center);
    rd.number(p, "seed", "perturbation", ps.seed);
    if (!(ps.width > 0.0)) rd.fail("perturbation.width", "must be positive");
  }

  if (!j.contains("grid")) {
    rd.fail("grid", "missing");
  } else if (rd.object(j["grid"], "grid", {"x_min", "x_max", "n"})) {
    double a = -100, b = 100;
    std::size_t n = 4096;
    rd.number(j["grid"], "x_min", "grid", a, true);
    rd.number(j["grid"], "x_max", "grid", b, true);
    rd.number(j["grid"], "n", "grid", n, true);
    rd.guard("grid", [&] { cfg.grid = Grid1D(a, b, n); });
  }

  if (!j.contains("solver")) {
    rd.fail("solver", "missing");
  } else if (rd.object(j["solver"], "solver",
                       {"cfl_hyperbolic", "diff_number", "t_end", "boundary_mode",
                        "snapshot_interval"})) {
    const json& s = j["solver"];
    auto& sc = cfg.solver;
    rd.number(s, "cfl_hyperbolic", "solver", sc.cfl_hyperbolic);
    rd.number(s, "diff_number", "solver", sc.diff_number);
    rd.number(s, "t_end", "solver", sc.t_end, true);
    rd.number(s, "snapshot_interval", "solver", sc.snapshot_interval);
    std::string bm = name(sc.boundary_mode);
    rd.text(s, "boundary_mode", "solver", bm);
    if (bm == "pin_to_ansatz") {
      sc.boundary_mode = BoundaryMode::pin_to_ansatz;
    } else if (bm == "extrapolate") {
      sc.boundary_mode = BoundaryMode::extrapolate;
    } else {
      rd.fail("solver.boundary_mode", "expected pin_to_ansatz or extrapolate");
    }
    if (!(sc.cfl_hyperbolic > 0.0)) rd.fail("solver.cfl_hyperbolic", "must be positive");
    if (!(sc.diff_number > 0.0)) rd.fail("solver.diff_number", "must be positive");
    if (!(sc.t_end >= 0.0) || !std::isfinite(sc.t_end)) rd.fail("solver.t_end", "must be >= 0");
    if (!(sc.snapshot_interval >= 0.0)) rd.fail("solver.snapshot_interval", "must be >= 0");
  }
  rd.number(j, "observer_stride", "", cfg.solver.output_stride);
  if (cfg.solver.output_stride == 0) rd.fail("observer_stride", "must be >= 1");
  rd.text(j, "output_dir", "", cfg.output_dir);
  rd.finish();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.ansatz_kind == AnsatzKind::contact) {
    if (!is_contact_compatible(cfg.gas, cfg.ends, 1e-10)) {
      throw Error(ErrorCode::ConfigInvalid,
                  "ends: contact ansatz needs u_- == u_+ and p_- == p_+");
    }
  } else {
    try {
      (void)solve_intermediate_states(cfg.gas, cfg.ends);
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigInvalid, std::string("ends: ") + e.what());
    }
  }
  try {
    (void)sample_perturbation(cfg.perturbation, cfg.grid);
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("perturbation: ") + e.what());
  }
}

ExperimentAnsatz::ExperimentAnsatz(const ExperimentConfig& cfg) {
  if (cfg.ansatz_kind == AnsatzKind::contact) {
    contact_.emplace(ContactWave::from_ends(cfg.gas, cfg.ends, cfg.profile));
  } else {
    composite_.emplace(CompositeAnsatz::build(cfg.gas, cfg.ends, cfg.profile));
  }
}

const AnsatzProfile& ExperimentAnsatz::profile() const {
  if (contact_) return *contact_;
  return *composite_;
}

const ContactWave& ExperimentAnsatz::contact() const {
  if (contact_) return *contact_;
  return composite_->contact();
}

std::optional<DecayConstants> default_decay_constants(const ContactWave& contact) {
  if (contact.delta() == 0.0) return std::nullopt;
  const std::vector<double> ts = {0.0, 1.0, 3.0, 10.0, 30.0, 100.0};
  std::vector<double> xs;
  for (int k = -240; k <= 240; ++k) xs.push_back(0.25 * k);
  return fit_decay_constants(contact, ts, xs);
}

SimulationResult simulate(const ExperimentConfig& cfg, const ExperimentAnsatz& ansatz) {
  SimulationResult res;
  res.constants = default_decay_constants(ansatz.contact());
  std::optional<WeightKernel> kernel;
  if (res.constants && res.constants->alpha > 0.0) kernel.emplace(res.constants->alpha);

  std::optional<DiagnosticsObserver> diag;
  if (ansatz.composite() != nullptr) {
    diag.emplace(cfg.gas, *ansatz.composite(), kernel);
  } else {
    diag.emplace(cfg.gas, ansatz.contact(), kernel);
  }
  FieldState s0 = initialize(cfg.gas, ansatz.profile(), cfg.perturbation, cfg.grid);
  NsSolver solver(cfg.gas, ansatz.profile(), cfg.solver);
  res.trajectory = solver.run(std::move(s0), {&*diag});
  res.records = diag->records();
  res.has_G = diag->has_G();
  res.has_D = diag->has_D();
  res.density_nonnegative = diag->density_nonnegative();
  res.omega2_bounded = diag->omega2_bounded();

  std::vector<double> t, sup;
  for (const auto& r : res.records) {
    t.push_back(r.t);
    sup.push_back(r.sup_perturbation);
  }
  try {
    res.decay = decay_fit(t, sup);
    res.decay_note = "evaluated";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientSamples) throw;
    res.decay_note = "not evaluated (InsufficientSamples)";
  }
  return res;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentAnsatz& ansatz,
                   const SimulationResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);
  const AnsatzProfile& a = ansatz.profile();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  {
    CsvWriter w((base / "snapshots.csv").string(), {"t", "x", "v", "u", "theta", "V", "U", "Theta"});
    for (const FieldState& s : result.trajectory.snapshots) {
      for (std::size_t i = 0; i < s.v.size(); ++i) {
        const double x = s.grid.x(i);
        const AnsatzSample an = a.evaluate(x, s.t);
        w.row({s.t, x, s.v[i], s.u[i], s.theta[i], an.V, an.U, an.Theta});
      }
    }
  }
  {
    CsvWriter w((base / "observers.csv").string(),
                {"t", "entropy_total", "G_t", "D_t", "sup_pert", "l2_pert", "h1_pert",
                 "omega2_measure", "weighted_ratio"});
    const bool weighted = result.constants && result.constants->alpha > 0.0;
    for (const auto& r : result.records) {
      w.row({r.t, r.entropy_total, result.has_G ? r.G_t : nan, result.has_D ? r.D_t : nan,
             r.sup_perturbation, r.l2_perturbation, r.h1_perturbation, r.omega2_measure,
             weighted ? r.weighted_ratio : nan});
    }
  }
  {
    ojson meta;
    meta["schema"] = "cwlab-run-metadata/1";
    meta["versions"] = {{"cwlab", kVersion},
                        {"compiler", __VERSION__},
                        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    meta["config"] = config_json(cfg);
    meta["grid"] = {{"dx", cfg.grid.dx()}, {"nodes", cfg.grid.nodes()}};
    if (const CompositeAnsatz* c = ansatz.composite()) {
      const auto& m = c->middles();
      meta["middle_states"] = {{"v_m_minus", m.v_m_minus}, {"v_m_plus", m.v_m_plus},
                               {"theta_m_minus", m.theta_m_minus}, {"theta_m_plus", m.theta_m_plus},
                               {"u_m", m.u_m}, {"p_m", m.p_m}};
    }
    const auto& prof = ansatz.contact().profile();
    meta["contact_profile"] = {{"b", prof.b_coeff}, {"ode_residual", prof.ode_residual},
                               {"iterations", prof.iterations}};
    if (result.constants) {
      meta["decay_constants"] = {{"c1", result.constants->c1}, {"alpha", result.constants->alpha},
                                 {"bound_constant", result.constants->bound_constant}};
    }
    std::ofstream((base / "metadata.json").string(), std::ios::binary) << meta.dump(2) << "\n";
  }
  {
    const auto& tr = result.trajectory;
    ojson sum;
    sum["steps"] = tr.steps;
    sum["wall_seconds"] = tr.wall_seconds;
    sum["t_final"] = tr.snapshots.back().t;
    sum["min_v"] = tr.min_v;
    sum["min_theta"] = tr.min_theta;
    sum["observer_records"] = result.records.size();
    sum["snapshots"] = tr.snapshots.size();
    const auto& first = result.records.front();
    const auto& last = result.records.back();
    sum["C0"] = first.C0_ref;
    sum["sup_pert_initial"] = first.sup_perturbation;
    sum["sup_pert_final"] = last.sup_perturbation;
    if (result.has_G) sum["G_final"] = last.G_t;
    if (result.has_D) sum["D_final"] = last.D_t;
    sum["density_nonnegative"] = result.density_nonnegative;
    sum["omega2_bounded"] = result.omega2_bounded;
    ojson decay = {{"status", result.decay_note}};
    if (result.decay) {
      decay["is_decaying"] = result.decay->is_decaying;
      decay["half_life"] = std::isfinite(result.decay->half_life)
                               ? ojson(result.decay->half_life)
                               : ojson("inf");
    }
    sum["decay_fit"] = decay;
    std::ofstream((base / "summary.json").string(), std::ios::binary) << sum.dump(2) << "\n";
  }
}

SimulationResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const ExperimentAnsatz ansatz(cfg);
  SimulationResult res = simulate(cfg, ansatz);
  write_outputs(cfg, ansatz, res, cfg.output_dir);
  return res;
}

}  // namespace cwlab
