#pragma once

namespace cwlab {

/// Ansatz values and first x-derivatives at one (x, t).
struct AnsatzSample {
  double V, U, Theta;
  double V_x, U_x, Theta_x;
};

/// An evaluable wave profile (V, U, Theta)(x, t). Implementations are
/// immutable after construction and safe to evaluate concurrently.
class AnsatzProfile {
 public:
  virtual ~AnsatzProfile() = default;
  virtual AnsatzSample evaluate(double x, double t) const = 0;
};

}  // namespace cwlab
