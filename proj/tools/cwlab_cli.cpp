#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "cwlab/composite_wave.hpp"
#include "cwlab/contact_profile.hpp"
#include "cwlab/csv.hpp"
#include "cwlab/errors.hpp"
#include "cwlab/experiment.hpp"
#include "cwlab/numerics.hpp"
#include "cwlab/rarefaction_profile.hpp"
#include "cwlab/verify/suite.hpp"

namespace fs = std::filesystem;
using namespace cwlab;

namespace {

enum Exit { ok = 0, config_error = 1, numerical_failure = 2, property_failure = 3 };

struct Options {
  std::string config;
  std::string out;
  std::string level = "fast";
  std::vector<double> times;
  double w_l = 0.5;
  double w_r = 1.5;
  std::vector<int> criteria;
};

ExperimentConfig load(const Options& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (!o.out.empty()) cfg.output_dir = o.out;
  return cfg;
}

fs::path out_dir(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  return fs::path(cfg.output_dir);
}

std::string kv(const char* key, double value) { return std::string(key) + "=" + format_double(value); }

int contact_profile(const Options& o) {
  const ExperimentConfig cfg = load(o);
  const ContactWave w = ContactWave::from_ends(cfg.gas, cfg.ends, cfg.profile);
  const SelfSimilarProfile& p = w.profile();
  const fs::path path = out_dir(cfg) / "contact_profile.csv";
  CsvWriter csv(path.string(), {"xi", "theta", "dtheta"},
                {kv("R", cfg.gas.R()) + " " + kv("gamma", cfg.gas.gamma()) + " " +
                     kv("mu", cfg.gas.mu()) + " " + kv("kappa", cfg.gas.kappa()),
                 kv("theta_minus", p.theta_minus) + " " + kv("theta_plus", p.theta_plus) + " " +
                     kv("p_plus", p.p_plus) + " " + kv("b", p.b_coeff),
                 kv("ode_residual", p.ode_residual) + " " +
                     kv("boundary_error", p.boundary_error)});
  for (std::size_t i = 0; i < p.xi.size(); ++i) csv.row({p.xi[i], p.theta[i], p.dtheta[i]});
  std::cout << path.string() << "\n";
  return ok;
}

int rarefaction_profile(const Options& o) {
  ExperimentConfig cfg = load(o);
  const CompositeAnsatz c = CompositeAnsatz::build(cfg.gas, cfg.ends, cfg.profile);
  const std::vector<double> times = o.times.empty() ? std::vector<double>{10.0} : o.times;
  const fs::path path = out_dir(cfg) / "rarefaction_profile.csv";
  CsvWriter csv(path.string(), {"family", "t", "x", "w", "V", "U", "Theta", "w_x"});
  for (int fam : {1, 3}) {
    const RarefactionWave& r = fam == 1 ? c.rare_minus() : c.rare_plus();
    for (double t : times) {
      for (std::size_t i = 0; i < cfg.grid.nodes(); ++i) {
        const double x = cfg.grid.x(i);
        const RarefactionSample s = r.evaluate_full(x, t);
        const BurgersSample b = burgers_eval(r.burgers(), x, t);
        csv.row({static_cast<double>(fam), t, x, s.w, s.V, s.U, s.Theta, b.w_x});
      }
    }
  }
  std::cout << path.string() << "\n";
  return ok;
}

int burgers_rates(const Options& o) {
  ExperimentConfig cfg = load(o);
  const BurgersWave b(o.w_l, o.w_r);
  const std::vector<double> times = o.times.empty() ? log_space(10.0, 1000.0, 9) : o.times;
  const std::vector<double> ps = {1.0, 2.0, std::numeric_limits<double>::infinity()};
  const LpRateTable table = lp_rate_report(b, ps, times);
  const fs::path path = out_dir(cfg) / "burgers_rates.csv";
  CsvWriter csv(path.string(), {"p", "t", "norm"});
  for (const auto& row : table.rows) csv.row({row.p, row.t, row.norm});
  for (std::size_t k = 0; k < table.exponents.size(); ++k) {
    std::printf("p=%s slope=%.6f\n", format_double(table.exponents[k]).c_str(), table.slopes[k]);
  }
  std::cout << path.string() << "\n";
  return ok;
}

int composite_profile(const Options& o) {
  ExperimentConfig cfg = load(o);
  const CompositeAnsatz c = CompositeAnsatz::build(cfg.gas, cfg.ends, cfg.profile);
  const std::vector<double> times = o.times.empty() ? std::vector<double>{0.0} : o.times;
  const fs::path path = out_dir(cfg) / "composite_profile.csv";
  CsvWriter csv(path.string(), {"t", "x", "V", "U", "Theta", "F", "G"});
  for (double t : times) {
    for (std::size_t i = 0; i < cfg.grid.nodes(); ++i) {
      const double x = cfg.grid.x(i);
      const AnsatzSample s = c.evaluate(x, t);
      const SourceTerms st = c.source_terms(x, t);
      csv.row({t, x, s.V, s.U, s.Theta, st.F, st.G});
    }
  }
  std::cout << path.string() << "\n";
  return ok;
}

int riemann_solve(const Options& o) {
  ExperimentConfig cfg = load(o);
  const WaveDecomposition m = solve_intermediate_states(cfg.gas, cfg.ends);
  nlohmann::ordered_json j;
  j["v_m_minus"] = m.v_m_minus;
  j["v_m_plus"] = m.v_m_plus;
  j["theta_m_minus"] = m.theta_m_minus;
  j["theta_m_plus"] = m.theta_m_plus;
  j["u_m"] = m.u_m;
  j["p_m"] = m.p_m;
  j["delta"] = m.delta;
  const fs::path path = out_dir(cfg) / "riemann.json";
  std::ofstream(path, std::ios::binary) << j.dump(2) << '\n';
  std::cout << j.dump(2) << '\n';
  return ok;
}

int simulate_cmd(const Options& o) {
  const ExperimentConfig cfg = load(o);
  const SimulationResult r = run_experiment(cfg);
  const auto& last = r.records.back();
  std::printf("t=%g steps=%zu sup_pert=%.6g decay: %s\n", last.t, r.trajectory.steps,
              last.sup_perturbation, r.decay_note.c_str());
  std::cout << cfg.output_dir << "\n";
  return ok;
}

int verify_cmd(const Options& o) {
  using verify::Level;
  if (o.level != "fast" && o.level != "full") {
    throw Error(ErrorCode::ConfigInvalid, "--level must be fast or full");
  }
  std::vector<verify::Entry> entries;
  if (!o.criteria.empty()) {
    entries = verify::run_acceptance(o.criteria, &std::cout);
  } else {
    const Level level = o.level == "full" ? Level::full : Level::fast;
    entries = verify::verify_suite(level, &std::cout);
  }
  std::size_t failed = 0;
  for (const auto& e : entries) failed += e.passed ? 0 : 1;
  std::printf("%zu/%zu passed\n", entries.size() - failed, entries.size());
  return failed == 0 ? ok : property_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscous contact and composite wave experiments"};
  app.require_subcommand(1);
  Options o;

  auto with_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory (overrides output_dir)");
    return sub;
  };
  auto* cp = with_config(app.add_subcommand("contact-profile", "self-similar contact profile"));
  auto* rp = with_config(app.add_subcommand("rarefaction-profile", "rarefaction ansatz on the grid"));
  rp->add_option("--times", o.times, "sample times");
  auto* br = with_config(app.add_subcommand("burgers-rates", "L^p decay table for w_x"));
  br->add_option("--times", o.times, "sample times");
  br->add_option("--wl", o.w_l, "left Burgers state");
  br->add_option("--wr", o.w_r, "right Burgers state");
  auto* cmp = with_config(app.add_subcommand("composite-profile", "composite ansatz and F, G"));
  cmp->add_option("--times", o.times, "sample times");
  auto* rs = with_config(app.add_subcommand("riemann-solve", "intermediate states"));
  auto* sim = with_config(app.add_subcommand("simulate", "perturbed run with observers"));
  auto* ver = app.add_subcommand("verify", "property suite (fast) or property + acceptance (full)");
  ver->add_option("--level", o.level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  ver->add_option("--criteria", o.criteria, "run only these acceptance criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    if (*cp) return contact_profile(o);
    if (*rp) return rarefaction_profile(o);
    if (*br) return burgers_rates(o);
    if (*cmp) return composite_profile(o);
    if (*rs) return riemann_solve(o);
    if (*sim) return simulate_cmd(o);
    if (*ver) return verify_cmd(o);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == ErrorCode::ConfigInvalid ? config_error : numerical_failure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return config_error;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return numerical_failure;
  }
  return ok;
}
