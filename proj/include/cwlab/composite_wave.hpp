#pragma once

#include <span>

#include "cwlab/ansatz.hpp"
#include "cwlab/contact_profile.hpp"
#include "cwlab/rarefaction_profile.hpp"
#include "cwlab/riemann_waves.hpp"

namespace cwlab {

struct CompositeSample {
  AnsatzSample total;
  ContactSample contact;
  RarefactionSample minus;
  RarefactionSample plus;
};

struct SourceTerms {
  double F;
  double G;
};

struct QTerms {
  double Q1;
  double Q2;
};

enum class Region { minus, contact, plus };

struct RegionDecay {
  double K;
  double c0;
};

/// 1-rarefaction + viscous contact + 3-rarefaction superposition
///   (V, U, Theta) = (V_-^r, U_-^r, Theta_-^r) + (V^cd, U^cd, Theta^cd) + (V_+^r, U_+^r, Theta_+^r)
///                   - (v_-^m, 0, theta_-^m) - (v_+^m, 0, theta_+^m).
/// Components are assembled in the frame where u^m = 0; evaluate() adds u^m back.
class CompositeAnsatz : public AnsatzProfile {
 public:
  static CompositeAnsatz build(const GasParams& g, const EndStates& ends,
                               const ProfileOptions& opts = {});

  AnsatzSample evaluate(double x, double t) const override;
  CompositeSample evaluate_full(double x, double t) const;

  SourceTerms source_terms(double x, double t) const;
  QTerms q_terms(const ThermoState& state, double x, double t) const;

  Region region(double x, double t) const;

  const ContactWave& contact() const { return contact_; }
  const RarefactionWave& rare_minus() const { return rare_minus_; }
  const RarefactionWave& rare_plus() const { return rare_plus_; }
  const WaveDecomposition& middles() const { return middles_; }
  const GasParams& gas() const { return gas_; }
  /// Larger of the two rarefaction strengths |v_+-^m - v_+-|.
  double rarefaction_strength() const;

 private:
  CompositeAnsatz(GasParams g, WaveDecomposition m, ContactWave c, RarefactionWave rm,
                  RarefactionWave rp);

  GasParams gas_;
  WaveDecomposition middles_;
  ContactWave contact_;
  RarefactionWave rare_minus_;
  RarefactionWave rare_plus_;
  double edge_minus_;  // lambda_-(v_-^m, s_-)
  double edge_plus_;   // lambda_+(v_+^m, s_+)
};

/// ||(F, G)(t)||_{L^1} on n uniform cells of [x_min, x_max], trapezoidal.
double source_l1_norm(const CompositeAnsatz& c, double t, double x_min, double x_max,
                      std::size_t n);

/// Fits (U_+-^r)_x + |(V_+-^r)_x| + |V_+-^r - v_+-^m| + |(Theta_+-^r)_x| + |Theta_+-^r - theta_+-^m|
///   <= K delta exp(-c0 (|x| + t))
/// over lattice points inside the contact region, delta the rarefaction strength.
/// Throws Error{DegenerateWave} when both rarefactions are trivial and
/// Error{InsufficientSamples} when no lattice point lies in the contact region.
RegionDecay fit_region_decay(const CompositeAnsatz& c, std::span<const double> t_samples,
                             std::span<const double> x_samples);

}  // namespace cwlab
