#include "cwlab/errors.hpp"

#include <sstream>

namespace cwlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::DegenerateWave: return "DegenerateWave";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::PositivityViolation: return "PositivityViolation";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

namespace {

std::string describe(double t, std::size_t node, char field, double value, double suggested_dt,
                     const std::string& detail) {
  std::ostringstream os;
  os << field << " = " << value << " at node " << node << ", t = " << t
     << " (retry with dt <= " << suggested_dt << ")";
  if (!detail.empty()) os << "; " << detail;
  return os.str();
}

}  // namespace

PositivityViolation::PositivityViolation(double t, std::size_t node, char field, double value,
                                         double suggested_dt, const std::string& detail)
    : Error(ErrorCode::PositivityViolation,
            describe(t, node, field, value, suggested_dt, detail)),
      t_(t),
      node_(node),
      field_(field),
      value_(value),
      suggested_dt_(suggested_dt) {}

}  // namespace cwlab
