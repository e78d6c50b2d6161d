#include "apdyn/commands.hpp"

#include "apdyn/acceptance.hpp"
#include "apdyn/ap_solver.hpp"
#include "apdyn/dichotomy.hpp"
#include "apdyn/dynamics.hpp"
#include "apdyn/equilibria.hpp"
#include "apdyn/errors.hpp"
#include "apdyn/report.hpp"

#include <filesystem>
#include <sstream>

namespace apdyn {

using nlohmann::json;

namespace {

std::string in_dir(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void prepare(const std::string& dir) { std::filesystem::create_directories(dir); }

json header(const ExperimentConfig& cfg, const char* command) {
  return {{"version", kVersion}, {"command", command}, {"config", config_to_json(cfg)}};
}

json equilibrium_json(const Equilibrium& e, const SystemSpec& spec, double newton_tol) {
  return {{"morse_index", e.morse_index},
          {"gap", e.gap},
          {"alpha_norm", alpha_norm(spec, e.state)},
          {"newton_residual", checked(e.newton_residual, newton_tol, e.newton_residual < newton_tol)},
          {"spectrum_head", vector_json(e.spectrum.head(std::min<Eigen::Index>(6, e.spectrum.size())))},
          {"state", vector_json(e.state)}};
}

struct ApSet {
  std::vector<Equilibrium> eqs;
  std::vector<Dichotomy> dich;
  std::vector<ContractionBudget> budgets;
  std::vector<AlmostPeriodicSolution> aps;
};

// Equilibria, dichotomies, budgets and AP solutions for the configured forcing.
ApSet solve_all(const ExperimentConfig& cfg) {
  const SystemSpec spec = cfg.spec();
  const QuasiPeriodicForcing f = cfg.forcing();
  EquilibriumSearchOptions opts;
  opts.newton_tol = cfg.newton_tol;
  ApSet s;
  s.eqs = find_equilibria(spec, opts);
  for (std::size_t i = 0; i < s.eqs.size(); ++i) {
    s.dich.push_back(build_dichotomy(spec, s.eqs[i]));
    s.budgets.push_back(contraction_budget(spec, s.eqs[i], s.dich[i], f));
    if (!(f.epsilon < s.budgets[i].eps_threshold)) {
      std::ostringstream msg;
      msg << "epsilon " << f.epsilon << " exceeds the contraction threshold "
          << s.budgets[i].eps_threshold << " of equilibrium " << i << " (Morse index "
          << s.eqs[i].morse_index << ")";
      throw BudgetError(msg.str(), f.epsilon, s.budgets[i].eps_threshold);
    }
    s.aps.push_back(picard_iterate(spec, s.eqs[i], s.dich[i], f, s.budgets[i], cfg.ap_grid(),
                                   cfg.picard_tol, cfg.picard_max_iter));
  }
  return s;
}

}  // namespace

int cmd_equilibria(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  validate_config(cfg);
  prepare(out_dir);
  const SystemSpec spec = cfg.spec();
  EquilibriumSearchOptions opts;
  opts.newton_tol = cfg.newton_tol;
  const auto eqs = find_equilibria(spec, opts);
  const auto hyp = hyperbolicity_report(eqs, cfg.hyperbolicity_threshold);
  const int expected = chafee_infante_count(cfg.lambda);
  const bool count_ok = static_cast<int>(eqs.size()) == expected;

  json report = header(cfg, "equilibria");
  json list = json::array();
  Matrix states(spec.N(), static_cast<Eigen::Index>(eqs.size()));
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    list.push_back(equilibrium_json(eqs[i], spec, cfg.newton_tol));
    states.col(static_cast<Eigen::Index>(i)) = eqs[i].state;
  }
  report["equilibria"] = list;
  report["count"] = {{"value", eqs.size()}, {"expected", expected}, {"pass", count_ok}};
  report["hyperbolicity"] = {{"min_gap", checked(hyp.min_gap, hyp.threshold, hyp.all_hyperbolic())},
                             {"flagged", hyp.flagged}};
  write_json(in_dir(out_dir, "equilibria.json"), report);
  write_points_csv(in_dir(out_dir, "equilibria.csv"), 0.0, states);

  log << "equilibria: " << eqs.size() << " found, " << expected << " expected; min gap "
      << hyp.min_gap << "\n";
  return count_ok && hyp.all_hyperbolic() ? 0 : 1;
}

int cmd_ap_solve(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  validate_config(cfg);
  prepare(out_dir);
  const SystemSpec spec = cfg.spec();
  const ApSet s = solve_all(cfg);

  json report = header(cfg, "ap-solve");
  json list = json::array();
  for (std::size_t i = 0; i < s.aps.size(); ++i) {
    const auto& ap = s.aps[i];
    const auto& b = s.budgets[i];
    list.push_back({{"index", i},
                    {"morse_index", s.eqs[i].morse_index},
                    {"beta", b.beta},
                    {"M1", b.M1},
                    {"delta0", b.delta0},
                    {"eps_threshold", checked(b.eps_threshold, cfg.epsilon, cfg.epsilon < b.eps_threshold)},
                    {"picard_iterations", ap.picard_iterations},
                    {"contraction_factor", checked(ap.contraction_factor, 0.5, ap.contraction_factor <= 0.5)},
                    {"fixed_point_residual", checked(ap.fixed_point_residual, 1e-6, ap.fixed_point_residual < 1e-6)},
                    {"ode_residual", checked(ap.ode_residual, 1e-4, ap.ode_residual < 1e-4)},
                    {"deviation", checked(ap.deviation, b.delta0, ap.deviation <= b.delta0)},
                    {"csv", "ap_orbit_" + std::to_string(i) + ".csv"}});
    write_orbit_csv(in_dir(out_dir, "ap_orbit_" + std::to_string(i) + ".csv"), ap.orbit,
                    cfg.csv_stride);
    log << "orbit " << i << " (Morse " << s.eqs[i].morse_index << "): deviation " << ap.deviation
        << ", ode residual " << ap.ode_residual << "\n";
  }
  report["orbits"] = list;
  write_json(in_dir(out_dir, "ap_solve.json"), report);
  bool ok = true;
  for (const auto& ap : s.aps) ok = ok && ap.ode_residual < 1e-4 && ap.fixed_point_residual < 1e-6;
  return ok ? 0 : 1;
}

int cmd_classify(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  validate_config(cfg);
  prepare(out_dir);
  const SystemSpec spec = cfg.spec();
  const ApSet s = solve_all(cfg);
  const Matrix X0 = sample_alpha_ball(spec, cfg.ball_radius, cfg.n_samples, cfg.rng_seed);
  const auto cls = classify_bundle(spec, cfg.forcing(), s.aps, X0, 0.0, cfg.horizon,
                                   cfg.max_horizon, cfg.trailing_window, cfg.classify_tol,
                                   cfg.integration_dt);

  json table = json::array();
  std::vector<int> hist(s.aps.size(), 0);
  json unresolved = json::array();
  for (std::size_t i = 0; i < cls.labels.size(); ++i) {
    const auto x0 = X0.col(static_cast<Eigen::Index>(i));
    json row = {{"sample", i},
                {"x0_alpha_norm", alpha_norm(spec, x0)},
                {"horizon", cls.horizons[i]},
                {"distance", checked(cls.distances[i], cfg.classify_tol, cls.labels[i].has_value())}};
    if (cls.labels[i]) {
      row["index"] = *cls.labels[i];
      ++hist[static_cast<std::size_t>(*cls.labels[i])];
    } else {
      row["index"] = nullptr;
      unresolved.push_back(i);
    }
    table.push_back(row);
  }
  json basins = json::array();
  for (std::size_t a = 0; a < s.aps.size(); ++a) {
    basins.push_back({{"index", a}, {"morse_index", s.eqs[a].morse_index}, {"count", hist[a]}});
  }
  json report = header(cfg, "classify");
  report["table"] = table;
  report["basins"] = basins;
  report["unresolved"] = unresolved;
  write_json(in_dir(out_dir, "classify.json"), report);

  log << "classify: " << (cls.labels.size() - unresolved.size()) << "/" << cls.labels.size()
      << " resolved; basins";
  for (int h : hist) log << " " << h;
  log << "\n";
  return unresolved.empty() ? 0 : 1;
}

int cmd_pullback(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  validate_config(cfg);
  prepare(out_dir);
  const SystemSpec spec = cfg.spec();
  const QuasiPeriodicForcing f = cfg.forcing();
  const ApSet s = solve_all(cfg);
  const auto cloud = pullback_attractor_sample(spec, f, cfg.section_time, cfg.init_box, cfg.depths,
                                               cfg.integration_dt, cfg.cloud_tol);
  std::vector<ManifoldSample> manifolds;
  for (std::size_t i = 0; i < s.aps.size(); ++i) {
    manifolds.push_back(unstable_manifold_union(spec, f, s.aps[i], s.dich[i], cfg.section_time,
                                                cfg.manifold_directions, cfg.manifold_radii,
                                                cfg.manifold_horizon, cfg.integration_dt));
  }
  const auto rep = structure_check(spec, cloud, manifolds, cfg.structure_tol);
  const double diameter = one_sided_hausdorff(cloud.points, Matrix(cloud.points.col(0)), spec.alpha_weights());

  json report = header(cfg, "pullback");
  report["section_time"] = cloud.t;
  report["depths"] = cloud.depths;
  report["cloud_distances"] = cloud.distances;
  report["cloud_converged"] = checked(cloud.distances.back(), cfg.cloud_tol,
                                      cloud.distances.back() < cfg.cloud_tol);
  report["pullback_depth"] = cloud.pullback_depth;
  report["cloud_points"] = cloud.points.cols();
  report["cloud_radius_about_first_point"] = diameter;
  report["structure_distance"] = checked(rep.distance, rep.tolerance, rep.within_tolerance);
  report["dimension_proxy"] = rep.dimension_proxy;
  json msizes = json::array();
  for (const auto& m : manifolds) {
    msizes.push_back({{"morse_index", m.morse_index}, {"points", m.points.size()}});
  }
  report["manifold_samples"] = msizes;
  write_json(in_dir(out_dir, "pullback.json"), report);
  write_points_csv(in_dir(out_dir, "pullback_cloud.csv"), cloud.t, cloud.points);

  log << "pullback: depth " << cloud.pullback_depth << ", structure distance " << rep.distance
      << ", dimension proxy " << rep.dimension_proxy << "\n";
  return rep.within_tolerance ? 0 : 1;
}

int cmd_validate(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  validate_config(cfg);
  prepare(out_dir);
  AcceptanceOptions opts;
  opts.only = cfg.criteria;
  opts.tolerances = cfg.tolerances;
  opts.seed = cfg.rng_seed;
  const auto results = run_acceptance(opts, [&](const CriterionResult& r) {
    log << format_result_line(r) << "\n" << std::flush;
  });
  json report = results_json(results);
  report["config"] = config_to_json(cfg);
  write_json(in_dir(out_dir, "validate.json"), report);
  return report["all_passed"].get<bool>() ? 0 : 1;
}

}  // namespace apdyn
