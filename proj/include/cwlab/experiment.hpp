#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cwlab/composite_wave.hpp"
#include "cwlab/contact_profile.hpp"
#include "cwlab/diagnostics.hpp"
#include "cwlab/ns_solver.hpp"
#include "cwlab/riemann_waves.hpp"

namespace cwlab {

enum class AnsatzKind { contact, composite };

struct ExperimentConfig {
  GasParams gas = GasParams::monatomic_unit();
  EndStates ends{ThermoState(1.0, 0.0, 1.0), ThermoState(1.1, 0.0, 1.1)};
  AnsatzKind ansatz_kind = AnsatzKind::contact;
  ProfileOptions profile{};
  PerturbationSpec perturbation{};
  Grid1D grid{-100.0, 100.0, 4096};
  SolverConfig solver{};  ///< solver.output_stride is the observer stride
  std::string output_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;
};

/// JSON document; every key is listed in the README schema. Unknown keys,
/// wrong types and out-of-range values throw Error{ConfigInvalid} naming
/// every offending field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string emit_config(const ExperimentConfig& cfg);

/// Checks that the end states fit the ansatz kind (contact compatibility, or a
/// solvable rarefaction-contact-rarefaction decomposition). Throws Error{ConfigInvalid}.
void validate_config(const ExperimentConfig& cfg);

/// The ansatz named by the config, owning whichever wave it is.
class ExperimentAnsatz {
 public:
  explicit ExperimentAnsatz(const ExperimentConfig& cfg);

  const AnsatzProfile& profile() const;
  const ContactWave& contact() const;  ///< the contact layer in either kind
  const CompositeAnsatz* composite() const { return composite_ ? &*composite_ : nullptr; }

 private:
  std::optional<ContactWave> contact_;
  std::optional<CompositeAnsatz> composite_;
};

/// alpha = c1 / 4 from the contact layer on a fixed lattice, or nothing when
/// the contact has zero strength.
std::optional<DecayConstants> default_decay_constants(const ContactWave& contact);

struct SimulationResult {
  Trajectory trajectory;
  std::vector<EnergyReport> records;
  bool has_G = false;
  bool has_D = false;
  std::optional<DecayConstants> constants;
  std::optional<DecayFit> decay;
  std::string decay_note;  ///< "evaluated" or why not
  bool density_nonnegative = true;
  bool omega2_bounded = true;
};

SimulationResult simulate(const ExperimentConfig& cfg, const ExperimentAnsatz& ansatz);

/// snapshots.csv, observers.csv, metadata.json, summary.json into `dir`.
void write_outputs(const ExperimentConfig& cfg, const ExperimentAnsatz& ansatz,
                   const SimulationResult& result, const std::string& dir);

/// validate + simulate + write_outputs into cfg.output_dir.
SimulationResult run_experiment(const ExperimentConfig& cfg);

}  // namespace cwlab
