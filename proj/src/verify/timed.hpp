#pragma once

#include <chrono>
#include <cstdio>
#include <exception>
#include <string>

#include "cwlab/verify/suite.hpp"

namespace cwlab::verify {

struct Outcome {
  bool passed;
  std::string detail;
};

// Runs fn, turning exceptions into failures, and records the wall time.
template <class F>
inline Entry timed(const std::string& name, F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {name, o.passed, o.detail, s};
}

inline std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace cwlab::verify
