#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace cwlab::verify {

enum class Level { fast, full };

struct Entry {
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

using PhiFn = std::function<double(double)>;

/// Structural invariants and properties of every module on small lattices.
/// `phi` replaces the relative-entropy kernel in the kernel's own checks, so a
/// tampered kernel shows up as isolated failures.
std::vector<Entry> run_properties(Level level, const PhiFn& phi);
std::vector<Entry> run_properties(Level level);

/// Acceptance criteria 1-10 (all of them when `ids` is empty). Criterion 8
/// reuses the run of criterion 7. Progress lines go to `log` if given.
std::vector<Entry> run_acceptance(const std::vector<int>& ids = {}, std::ostream* log = nullptr);

/// Properties, plus the acceptance criteria at Level::full.
std::vector<Entry> verify_suite(Level level, std::ostream* log = nullptr);

void print_entries(std::ostream& os, const std::vector<Entry>& entries);

}  // namespace cwlab::verify
