#pragma once

#include "apdyn/config.hpp"

#include <ostream>
#include <string>

namespace apdyn {

// Subcommands of the experiment driver. Each writes its artifacts into
// out_dir (created if missing), prints a short summary to `log` and returns
// the process exit code (0 when every check passed).

int cmd_equilibria(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_ap_solve(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_classify(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_pullback(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_validate(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);

}  // namespace apdyn
