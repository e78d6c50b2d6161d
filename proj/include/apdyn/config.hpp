#pragma once

#include "apdyn/ap_solver.hpp"
#include "apdyn/dynamics.hpp"
#include "apdyn/system.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace apdyn {

struct ExperimentConfig {
  // system
  int N = 32;
  double lambda = 5.0;
  double alpha = 0.5;

  // forcing: epsilon * sum a_j cos(omega_j t + phi_j) * profile
  double epsilon = 1e-2;
  std::vector<double> frequencies = {1.0, 1.4142135623730951};
  std::vector<double> phases = {0.0, 0.0};
  std::vector<double> amplitudes = {1.0, 1.0};
  int profile_mode = 1;         // profile = profile_scale * e_mode unless given explicitly
  double profile_scale = 1e-2;
  std::vector<double> profile;  // optional explicit profile of length N

  // solver
  double newton_tol = 1e-12;
  double picard_tol = 1e-12;
  int picard_max_iter = 100;
  double tail_tol = 1e-10;
  double dt = 1e-2;             // AP grid step
  double window_start = -250.0;
  double window_end = 250.0;
  double integration_dt = 1e-2;
  double hyperbolicity_threshold = 1e-2;

  // sampling
  InitBox init_box;
  std::vector<double> depths = {5.0, 10.0, 20.0, 40.0};
  double cloud_tol = 1e-2;
  double structure_tol = 2e-2;
  double section_time = 0.0;
  int n_samples = 50;
  double ball_radius = 3.0;
  double horizon = 40.0;
  double max_horizon = 160.0;
  double trailing_window = 20.0;
  double classify_tol = 1e-3;
  int manifold_directions = 24;
  std::vector<double> manifold_radii = {1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4};
  double manifold_horizon = 10.0;

  // output
  int csv_stride = 10;

  // validate
  std::vector<int> criteria;                  // empty = all
  std::map<std::string, double> tolerances;   // overrides of pinned tolerances

  std::uint64_t rng_seed = 12345;

  SystemSpec spec() const;
  QuasiPeriodicForcing forcing() const;
  ApGridOptions ap_grid() const;
};

/// Embedded defaults as JSON (the schema of the config file).
nlohmann::json default_config_json();

/// Merges `user` onto the defaults. Unknown keys, wrong types and a missing
/// system.lambda raise ConfigError; so do invalid values (nonpositive
/// tolerances, negative epsilon, lambda within 1e-6 of some k^2).
ExperimentConfig parse_config(const nlohmann::json& user);
ExperimentConfig load_config(const std::string& path);
ExperimentConfig default_config();

/// Value checks shared by every entry point.
void validate_config(const ExperimentConfig& cfg);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace apdyn
