// Experiment driver: apdyn <equilibria|ap-solve|classify|pullback|validate>
//   [--config PATH] [--out DIR] [--seed U64]

#include "apdyn/commands.hpp"
#include "apdyn/config.hpp"
#include "apdyn/errors.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>

int main(int argc, char** argv) {
  CLI::App app{"Almost periodic solutions and attractors of the forced Chafee-Infante model"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override rng_seed");
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "Output directory");
  seed_opt->type_name("U64");

  using Command = std::function<int(const apdyn::ExperimentConfig&, const std::string&, std::ostream&)>;
  const std::map<std::string, std::pair<std::string, Command>> commands = {
      {"equilibria", {"Find and characterize the equilibria", apdyn::cmd_equilibria}},
      {"ap-solve", {"Compute the almost periodic solution of every equilibrium", apdyn::cmd_ap_solve}},
      {"classify", {"Classify the omega-limits of seeded trajectories", apdyn::cmd_classify}},
      {"pullback", {"Sample the pullback attractor and check its structure", apdyn::cmd_pullback}},
      {"validate", {"Run the acceptance suite", apdyn::cmd_validate}},
  };
  for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first);

  CLI11_PARSE(app, argc, argv);

  try {
    apdyn::ExperimentConfig cfg =
        config_path.empty() ? apdyn::default_config() : apdyn::load_config(config_path);
    if (*seed_opt) cfg.rng_seed = seed;
    for (const auto* sub : app.get_subcommands()) {
      return commands.at(sub->get_name()).second(cfg, out_dir, std::cout);
    }
  } catch (const apdyn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const apdyn::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
