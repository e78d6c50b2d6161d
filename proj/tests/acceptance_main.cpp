// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Optional arguments select criteria by number, e.g. `acceptance 1 6 12`.

#include "apdyn/acceptance.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  apdyn::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));
  int failed = 0;
  const auto results = apdyn::run_acceptance(opts, [&](const apdyn::CriterionResult& r) {
    std::cout << apdyn::format_result_line(r) << std::endl;
    if (!r.pass) ++failed;
  });
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
