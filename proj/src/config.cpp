#include "apdyn/config.hpp"

#include "apdyn/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace apdyn {

using nlohmann::json;

namespace {

bool is_integral(const json& v) {
  if (v.is_number_integer()) return true;
  if (!v.is_number_float()) return false;
  const double d = v.get<double>();
  return std::isfinite(d) && std::floor(d) == d;
}

void check_number(const json& def, const json& val, const std::string& path) {
  if (!val.is_number()) throw ConfigError("config: " + path + " must be a number");
  if (def.is_number_integer() && !is_integral(val)) {
    throw ConfigError("config: " + path + " must be an integer");
  }
}

// Recursively overlays `user` onto `base`, rejecting keys and types the
// defaults do not know. Objects whose default is empty are open maps of
// numbers; arrays must hold numbers of the default's kind.
void merge(json& base, const json& user, const std::string& path) {
  if (base.is_object()) {
    if (!user.is_object()) throw ConfigError("config: " + path + " must be an object");
    const bool open = base.empty();
    for (auto it = user.begin(); it != user.end(); ++it) {
      const std::string sub = path.empty() ? it.key() : path + "." + it.key();
      if (open) {
        if (!it.value().is_number()) throw ConfigError("config: " + sub + " must be a number");
        base[it.key()] = it.value();
        continue;
      }
      if (!base.contains(it.key())) throw ConfigError("config: unknown key " + sub);
      merge(base[it.key()], it.value(), sub);
    }
    return;
  }
  if (base.is_array()) {
    if (!user.is_array()) throw ConfigError("config: " + path + " must be an array");
    const bool integral = !base.empty() && base.front().is_number_integer();
    for (const auto& v : user) {
      if (!v.is_number()) throw ConfigError("config: " + path + " must hold numbers");
      if (integral && !is_integral(v)) throw ConfigError("config: " + path + " must hold integers");
    }
    base = user;
    return;
  }
  if (base.is_number()) {
    check_number(base, user, path);
    base = user;
    return;
  }
  throw ConfigError("config: unsupported default at " + path);
}

template <typename T>
std::vector<T> vec(const json& j) {
  return j.get<std::vector<T>>();
}

ExperimentConfig from_json(const json& j) {
  ExperimentConfig c;
  const auto& sys = j.at("system");
  c.N = sys.at("N").get<int>();
  c.lambda = sys.at("lambda").get<double>();
  c.alpha = sys.at("alpha").get<double>();

  const auto& f = j.at("forcing");
  c.epsilon = f.at("epsilon").get<double>();
  c.frequencies = vec<double>(f.at("frequencies"));
  c.phases = vec<double>(f.at("phases"));
  c.amplitudes = vec<double>(f.at("amplitudes"));
  c.profile_mode = f.at("profile_mode").get<int>();
  c.profile_scale = f.at("profile_scale").get<double>();
  c.profile = vec<double>(f.at("profile"));

  const auto& s = j.at("solver");
  c.newton_tol = s.at("newton_tol").get<double>();
  c.picard_tol = s.at("picard_tol").get<double>();
  c.picard_max_iter = s.at("picard_max_iter").get<int>();
  c.tail_tol = s.at("tail_tol").get<double>();
  c.dt = s.at("dt").get<double>();
  c.window_start = s.at("window_start").get<double>();
  c.window_end = s.at("window_end").get<double>();
  c.integration_dt = s.at("integration_dt").get<double>();
  c.hyperbolicity_threshold = s.at("hyperbolicity_threshold").get<double>();

  const auto& p = j.at("sampling");
  const auto& box = p.at("init_box");
  c.init_box.modes = vec<int>(box.at("modes"));
  c.init_box.lo = box.at("lo").get<double>();
  c.init_box.hi = box.at("hi").get<double>();
  c.init_box.points_per_axis = box.at("points").get<int>();
  c.depths = vec<double>(p.at("depths"));
  c.cloud_tol = p.at("cloud_tol").get<double>();
  c.structure_tol = p.at("structure_tol").get<double>();
  c.section_time = p.at("section_time").get<double>();
  c.n_samples = p.at("n_samples").get<int>();
  c.ball_radius = p.at("ball_radius").get<double>();
  c.horizon = p.at("horizon").get<double>();
  c.max_horizon = p.at("max_horizon").get<double>();
  c.trailing_window = p.at("trailing_window").get<double>();
  c.classify_tol = p.at("classify_tol").get<double>();
  c.manifold_directions = p.at("manifold_directions").get<int>();
  c.manifold_radii = vec<double>(p.at("manifold_radii"));
  c.manifold_horizon = p.at("manifold_horizon").get<double>();

  c.csv_stride = j.at("output").at("csv_stride").get<int>();

  const auto& v = j.at("validate");
  c.criteria = vec<int>(v.at("criteria"));
  for (auto it = v.at("tolerances").begin(); it != v.at("tolerances").end(); ++it) {
    c.tolerances[it.key()] = it.value().get<double>();
  }
  c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  return c;
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  json tol = json::object();
  for (const auto& [k, v] : c.tolerances) tol[k] = v;
  return {
      {"system", {{"N", c.N}, {"lambda", c.lambda}, {"alpha", c.alpha}}},
      {"forcing",
       {{"epsilon", c.epsilon},
        {"frequencies", c.frequencies},
        {"phases", c.phases},
        {"amplitudes", c.amplitudes},
        {"profile_mode", c.profile_mode},
        {"profile_scale", c.profile_scale},
        {"profile", c.profile}}},
      {"solver",
       {{"newton_tol", c.newton_tol},
        {"picard_tol", c.picard_tol},
        {"picard_max_iter", c.picard_max_iter},
        {"tail_tol", c.tail_tol},
        {"dt", c.dt},
        {"window_start", c.window_start},
        {"window_end", c.window_end},
        {"integration_dt", c.integration_dt},
        {"hyperbolicity_threshold", c.hyperbolicity_threshold}}},
      {"sampling",
       {{"init_box",
         {{"modes", c.init_box.modes},
          {"lo", c.init_box.lo},
          {"hi", c.init_box.hi},
          {"points", c.init_box.points_per_axis}}},
        {"depths", c.depths},
        {"cloud_tol", c.cloud_tol},
        {"structure_tol", c.structure_tol},
        {"section_time", c.section_time},
        {"n_samples", c.n_samples},
        {"ball_radius", c.ball_radius},
        {"horizon", c.horizon},
        {"max_horizon", c.max_horizon},
        {"trailing_window", c.trailing_window},
        {"classify_tol", c.classify_tol},
        {"manifold_directions", c.manifold_directions},
        {"manifold_radii", c.manifold_radii},
        {"manifold_horizon", c.manifold_horizon}}},
      {"output", {{"csv_stride", c.csv_stride}}},
      {"validate", {{"criteria", c.criteria}, {"tolerances", tol}}},
      {"rng_seed", c.rng_seed},
  };
}

json default_config_json() {
  json j = config_to_json(ExperimentConfig{});
  // Keep the element kind of empty arrays visible to the merge.
  j["validate"]["criteria"] = json::array({0});
  j["forcing"]["profile"] = json::array({0.0});
  return j;
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

void validate_config(const ExperimentConfig& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("config: ") + name + " must be positive");
    }
  };
  if (c.N < 1) throw ConfigError("config: system.N must be at least 1");
  positive(c.lambda, "system.lambda");
  if (!(c.alpha >= 0.0 && c.alpha < 1.0)) throw ConfigError("config: system.alpha must be in [0, 1)");
  for (long k = 1; static_cast<double>(k * k) <= c.lambda + 1.0; ++k) {
    if (std::abs(c.lambda - static_cast<double>(k * k)) < 1e-6) {
      std::ostringstream msg;
      msg << "config: system.lambda = " << c.lambda << " is a bifurcation value (k^2 with k = "
          << k << "); equilibria are not hyperbolic there";
      throw ConfigError(msg.str());
    }
  }
  if (!(c.epsilon >= 0.0)) throw ConfigError("config: forcing.epsilon must be nonnegative");
  if (c.frequencies.size() != c.phases.size() || c.frequencies.size() != c.amplitudes.size()) {
    throw ConfigError("config: forcing frequencies, phases and amplitudes must have equal length");
  }
  if (c.profile.empty() && (c.profile_mode < 1 || c.profile_mode > c.N)) {
    throw ConfigError("config: forcing.profile_mode must be in 1..N");
  }
  if (!c.profile.empty() && static_cast<int>(c.profile.size()) != c.N) {
    throw ConfigError("config: forcing.profile must have length N");
  }
  positive(c.newton_tol, "solver.newton_tol");
  positive(c.picard_tol, "solver.picard_tol");
  positive(c.tail_tol, "solver.tail_tol");
  if (!(c.tail_tol < 1.0)) throw ConfigError("config: solver.tail_tol must be below 1");
  positive(c.dt, "solver.dt");
  positive(c.integration_dt, "solver.integration_dt");
  positive(c.hyperbolicity_threshold, "solver.hyperbolicity_threshold");
  if (c.picard_max_iter < 1) throw ConfigError("config: solver.picard_max_iter must be positive");
  if (!(c.window_end > c.window_start)) throw ConfigError("config: solver window is empty");
  positive(c.cloud_tol, "sampling.cloud_tol");
  positive(c.structure_tol, "sampling.structure_tol");
  positive(c.ball_radius, "sampling.ball_radius");
  positive(c.horizon, "sampling.horizon");
  positive(c.trailing_window, "sampling.trailing_window");
  positive(c.classify_tol, "sampling.classify_tol");
  positive(c.manifold_horizon, "sampling.manifold_horizon");
  if (c.max_horizon < c.horizon) throw ConfigError("config: sampling.max_horizon below horizon");
  if (c.trailing_window > c.horizon) throw ConfigError("config: trailing window exceeds horizon");
  if (c.n_samples < 1 || c.manifold_directions < 1) {
    throw ConfigError("config: sample counts must be positive");
  }
  if (c.init_box.points_per_axis < 1 || c.init_box.modes.empty()) {
    throw ConfigError("config: sampling.init_box needs modes and points");
  }
  for (int m : c.init_box.modes) {
    if (m < 1 || m > c.N) throw ConfigError("config: sampling.init_box.modes must be in 1..N");
  }
  if (c.depths.empty()) throw ConfigError("config: sampling.depths is empty");
  for (std::size_t i = 0; i < c.depths.size(); ++i) {
    if (!(c.depths[i] >= 0.0) || (i > 0 && !(c.depths[i] > c.depths[i - 1]))) {
      throw ConfigError("config: sampling.depths must be nonnegative and increasing");
    }
  }
  for (double r : c.manifold_radii) positive(r, "sampling.manifold_radii");
  if (c.csv_stride < 1) throw ConfigError("config: output.csv_stride must be positive");
}

ExperimentConfig parse_config(const json& user) {
  if (!user.is_object()) throw ConfigError("config: top level must be an object");
  if (!user.contains("system") || !user["system"].is_object() ||
      !user["system"].contains("lambda")) {
    throw ConfigError("config: missing required field system.lambda");
  }
  if (user.contains("rng_seed") && user["rng_seed"].is_number() && user["rng_seed"].get<double>() < 0) {
    throw ConfigError("config: rng_seed must be nonnegative");
  }
  // The typed defaults carry placeholder elements in otherwise empty arrays.
  json typed = default_config_json();
  merge(typed, user, "");
  if (!user.contains("validate") || !user["validate"].contains("criteria")) {
    typed["validate"]["criteria"] = json::array();
  }
  if (!user.contains("forcing") || !user["forcing"].contains("profile")) {
    typed["forcing"]["profile"] = json::array();
  }
  ExperimentConfig cfg = from_json(typed);
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json user;
  try {
    in >> user;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + path + " is not valid JSON: " + e.what());
  }
  return parse_config(user);
}

SystemSpec ExperimentConfig::spec() const {
  Vector eigs(N);
  for (int k = 1; k <= N; ++k) eigs[k - 1] = static_cast<double>(k) * k;
  return SystemSpec(eigs, lambda, alpha);
}

QuasiPeriodicForcing ExperimentConfig::forcing() const {
  QuasiPeriodicForcing f;
  f.epsilon = epsilon;
  f.frequencies = frequencies;
  f.phases = phases;
  f.amplitudes = amplitudes;
  if (!profile.empty()) {
    f.profile = Eigen::Map<const Vector>(profile.data(), static_cast<Eigen::Index>(profile.size()));
  } else {
    f.profile = Vector::Zero(N);
    if (profile_mode >= 1 && profile_mode <= N) f.profile[profile_mode - 1] = profile_scale;
  }
  return f;
}

ApGridOptions ExperimentConfig::ap_grid() const {
  ApGridOptions g;
  g.inner_start = window_start;
  g.inner_end = window_end;
  g.dt = dt;
  g.tail_tol = tail_tol;
  return g;
}

}  // namespace apdyn
