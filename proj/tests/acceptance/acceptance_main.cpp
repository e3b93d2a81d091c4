// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Optional arguments select criteria by number.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "cwlab/verify/suite.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::stoi(argv[i]));
  const auto entries = cwlab::verify::run_acceptance(ids, &std::cout);
  int failed = 0;
  for (const auto& e : entries) failed += e.passed ? 0 : 1;
  std::cout << entries.size() - failed << "/" << entries.size() << " criteria passed\n";
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
