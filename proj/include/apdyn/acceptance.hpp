#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace apdyn {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  nlohmann::json details;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::vector<int> only;                     // empty = all twelve
  std::map<std::string, double> tolerances;  // overrides of the pinned values
  std::uint64_t seed = 12345;
};

/// Pinned tolerances of the acceptance suite, keyed "cN.name".
const std::map<std::string, double>& pinned_tolerances();

/// Runs the selected criteria in order. Unknown tolerance names or criterion
/// ids raise ConfigError. `on_result` is called as each criterion finishes.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options,
    const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] C06 ap-solutions: ..." style line.
std::string format_result_line(const CriterionResult& r);

nlohmann::json results_json(const std::vector<CriterionResult>& results);

}  // namespace apdyn
