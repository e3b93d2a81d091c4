#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "cwlab/errors.hpp"
#include "cwlab/experiment.hpp"
#include "cwlab/verify/oracles.hpp"

using namespace cwlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cwlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::size_t line_count(const fs::path& p) {
  std::size_t n = 0;
  for (char c : slurp(p)) n += (c == '\n');
  return n;
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.grid = Grid1D(-50.0, 50.0, 256);
  cfg.perturbation.amp_phi = cfg.perturbation.amp_psi = cfg.perturbation.amp_zeta = 0.05;
  cfg.profile = {20.0, 2001, 1e-10};
  cfg.solver.t_end = 5.0;
  cfg.solver.snapshot_interval = 1.0;
  cfg.solver.output_stride = 20;
  cfg.output_dir = out.string();
  return cfg;
}

ErrorCode parse_error_code(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NoIntersection;  // sentinel: parsed fine
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(CWLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("harness_cli") {
  TEST_CASE("config round trip") {
    const ExperimentConfig def;
    CHECK(parse_config(emit_config(def)) == def);

    ExperimentConfig c;
    c.gas = GasParams(0.5, 1.4, 0.3, 2.0, 1.7);
    c.ansatz_kind = AnsatzKind::composite;
    c.perturbation = {PerturbationKind::random_fourier, 0.01, -0.02, 0.03, 4.0, 1.5, 123456789};
    c.solver.boundary_mode = BoundaryMode::extrapolate;
    c.solver.t_end = 12.5;
    c.solver.snapshot_interval = 0.1;
    c.solver.output_stride = 7;
    c.grid = Grid1D(-30.0, 70.0, 999);
    c.output_dir = "some/where";
    CHECK(parse_config(emit_config(c)) == c);

    // property: random valid configs survive emit/parse bit-exactly
    oracle::Draw d(11);
    for (int k = 0; k < 200; ++k) {
      ExperimentConfig r;
      r.gas = GasParams(d(0.1, 10.0), d(1.01, 3.0), d(0.01, 5.0), d(0.01, 5.0), d(0.1, 3.0));
      r.ends = {ThermoState(d(0.2, 3.0), d(-1.0, 1.0), d(0.2, 3.0)),
                ThermoState(d(0.2, 3.0), d(-1.0, 1.0), d(0.2, 3.0))};
      r.perturbation.amp_psi = d(-0.1, 0.1);
      r.perturbation.center = d(-5.0, 5.0);
      r.solver.t_end = d(0.0, 500.0);
      r.solver.cfl_hyperbolic = d(0.05, 0.9);
      r.grid = Grid1D(-d(50.0, 200.0), d(50.0, 200.0), 16 + static_cast<std::size_t>(d(0.0, 5000.0)));
      CHECK(parse_config(emit_config(r)) == r);
    }
  }

  TEST_CASE("config errors are loud and name the field") {
    const nlohmann::json base = nlohmann::json::parse(emit_config(ExperimentConfig{}));
    auto code_with = [&](auto&& edit) {
      nlohmann::json j = base;
      edit(j);
      return parse_error_code(j.dump());
    };
    CHECK(parse_error_code(base.dump()) == ErrorCode::NoIntersection);
    CHECK(code_with([](auto& j) { j["gas"]["colour"] = 2; }) == ErrorCode::ConfigInvalid);
    CHECK(code_with([](auto& j) { j["bogus"] = 1; }) == ErrorCode::ConfigInvalid);
    CHECK(code_with([](auto& j) { j["grid"]["n"] = "many"; }) == ErrorCode::ConfigInvalid);
    CHECK(code_with([](auto& j) { j["gas"]["gamma"] = 0.9; }) == ErrorCode::ConfigInvalid);
    CHECK(code_with([](auto& j) { j["solver"].erase("t_end"); }) == ErrorCode::ConfigInvalid);
    CHECK(code_with([](auto& j) { j["ansatz_kind"] = "shock"; }) == ErrorCode::ConfigInvalid);
    CHECK(code_with([](auto& j) { j["observer_stride"] = 0; }) == ErrorCode::ConfigInvalid);
    CHECK(code_with([](auto& j) { j.erase("profile"); }) == ErrorCode::NoIntersection);
    CHECK(parse_error_code("{not json") == ErrorCode::ConfigInvalid);
    try {
      nlohmann::json j = base;
      j["gas"]["colour"] = 2;
      j["solver"]["t_end"] = -1;
      parse_config(j.dump());
      FAIL("expected ConfigInvalid");
    } catch (const Error& e) {
      const std::string what = e.what();
      CHECK(e.code() == ErrorCode::ConfigInvalid);
      CHECK(what.find("colour") != std::string::npos);
      CHECK(what.find("t_end") != std::string::npos);
    }
  }

  TEST_CASE("validation against the ansatz kind") {
    ExperimentConfig c;
    c.ends = {ThermoState(1.0, 0.0, 1.0), ThermoState(1.0, 0.0, 1.2)};
    CHECK_THROWS_AS(validate_config(c), Error);
    c.ansatz_kind = AnsatzKind::composite;
    c.ends = {ThermoState(1.0, 0.0, 1.0), ThermoState(0.5, -1.0, 1.5)};
    CHECK_THROWS_AS(validate_config(c), Error);
  }

  TEST_CASE("t_end = 0 gives a single snapshot and no decay verdict") {
    const fs::path out = scratch("t0");
    ExperimentConfig cfg = small_config(out);
    cfg.solver.t_end = 0.0;
    const SimulationResult r = run_experiment(cfg);
    CHECK(r.trajectory.snapshots.size() == 1);
    CHECK_FALSE(r.decay.has_value());
    CHECK(r.decay_note == "not evaluated (InsufficientSamples)");
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK(summary["decay_fit"]["status"] == "not evaluated (InsufficientSamples)");
    CHECK(line_count(out / "snapshots.csv") == 1 + 257);
  }

  TEST_CASE("output files have the expected row counts") {
    const fs::path out = scratch("rows");
    const ExperimentConfig cfg = small_config(out);
    const SimulationResult r = run_experiment(cfg);
    // snapshots at t = 0, 1, ..., 5
    CHECK(line_count(out / "snapshots.csv") == 1 + 6 * 257);
    const std::size_t steps = r.trajectory.steps;
    const std::size_t records = 1 + steps / 20 + (steps % 20 != 0 ? 1 : 0);
    CHECK(line_count(out / "observers.csv") == 1 + records);
    CHECK(fs::exists(out / "metadata.json"));
    const auto meta = nlohmann::json::parse(slurp(out / "metadata.json"));
    CHECK(meta["config"]["grid"]["n"] == 256);
    const std::string header = slurp(out / "observers.csv").substr(0, 2);
    CHECK(header == "t,");
    CHECK(slurp(out / "observers.csv").find('\r') == std::string::npos);
  }

  TEST_CASE("same config twice gives byte-identical observers.csv") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    ExperimentConfig cfg = small_config(a);
    cfg.perturbation.kind = PerturbationKind::random_fourier;
    cfg.perturbation.seed = 2024;
    run_experiment(cfg);
    cfg.output_dir = b.string();
    run_experiment(cfg);
    CHECK(slurp(a / "observers.csv") == slurp(b / "observers.csv"));
    CHECK(slurp(a / "snapshots.csv") == slurp(b / "snapshots.csv"));
  }

  TEST_CASE("CLI exit codes") {
    const fs::path dir = scratch("cli");
    {
      nlohmann::json bad = nlohmann::json::parse(emit_config(ExperimentConfig{}));
      bad["surprise"] = true;
      std::ofstream(dir / "bad.json") << bad.dump();
    }
    CHECK(run_cli("simulate --config " + (dir / "bad.json").string()) == 1);
    // a perturbation that makes v negative fails numerically
    ExperimentConfig neg = small_config(dir / "neg");
    neg.perturbation.amp_phi = -2.0;
    std::ofstream(dir / "neg.json") << emit_config(neg);
    CHECK(run_cli("simulate --config " + (dir / "neg.json").string()) == 2);
    ExperimentConfig ok = small_config(dir / "ok");
    ok.solver.t_end = 0.5;
    std::ofstream(dir / "ok.json") << emit_config(ok);
    CHECK(run_cli("simulate --config " + (dir / "ok.json").string()) == 0);
    CHECK(run_cli("contact-profile --config " + (dir / "ok.json").string()) == 0);
    CHECK(fs::exists(dir / "ok" / "contact_profile.csv"));
    CHECK(run_cli("riemann-solve --out " + (dir / "rs").string()) == 0);
    CHECK(run_cli("verify --criteria 2") == 0);
    CHECK(run_cli("no-such-command") == 1);
  }
}
