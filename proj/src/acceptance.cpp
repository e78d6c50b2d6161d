#include "apdyn/acceptance.hpp"

#include "apdyn/ap_solver.hpp"
#include "apdyn/aputil.hpp"
#include "apdyn/dichotomy.hpp"
#include "apdyn/dynamics.hpp"
#include "apdyn/equilibria.hpp"
#include "apdyn/errors.hpp"
#include "apdyn/report.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <sstream>

namespace apdyn {

using nlohmann::json;

const std::map<std::string, double>& pinned_tolerances() {
  static const std::map<std::string, double> tol = {
      {"c1.newton_residual", 1e-10},
      {"c2.min_gap", 0.05},
      {"c4.sup_error", 1e-6},
      {"c5.lipschitz", 0.55},
      {"c6.ode_residual", 1e-4},
      {"c6.fixed_point_residual", 1e-6},
      {"c7.ratio_lo", 0.08},
      {"c7.ratio_hi", 0.12},
      {"c7.linear_oracle_rel", 0.1},
      {"c8.concentration", 0.99},
      {"c8.delta_fraction", 0.05},
      {"c8.inclusion_length", 60.0},
      {"c9.classify_tol", 1e-3},
      {"c10.structure_tol", 2e-2},
      {"c10.cloud_tol", 1e-2},
      {"c11.liapunov_slack", 1e-8},
      {"c11.stationarity", 1e-9},
      {"c12.projection", 1e-10},
      {"c12.constant", 1e-9},
  };
  return tol;
}

namespace {

constexpr int kN = 32;
constexpr double kLambda = 5.0;
constexpr double kEps = 1e-2;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

// Shared state of one suite run; everything at lambda = 5 is computed once.
class Context {
 public:
  Context(const AcceptanceOptions& options) : options_(options) {
    for (const auto& [k, v] : options.tolerances) {
      if (!pinned_tolerances().count(k)) throw ConfigError("validate: unknown tolerance " + k);
    }
  }

  double tol(const std::string& name) const {
    auto it = options_.tolerances.find(name);
    return it != options_.tolerances.end() ? it->second : pinned_tolerances().at(name);
  }
  std::uint64_t seed() const { return options_.seed; }

  const std::vector<Equilibrium>& equilibria(double lambda) {
    auto it = eqs_.find(lambda);
    if (it == eqs_.end()) {
      it = eqs_.emplace(lambda, find_equilibria(assemble_chafee_infante(kN, lambda))).first;
    }
    return it->second;
  }

  const SystemSpec& spec() { return spec_; }

  QuasiPeriodicForcing forcing(double eps) const {
    Vector profile = Vector::Zero(kN);
    profile[0] = 1e-2;
    return incommensurate_forcing(eps, profile);
  }

  const std::vector<Dichotomy>& dichotomies() {
    if (dich_.empty()) {
      for (const auto& e : equilibria(kLambda)) dich_.push_back(build_dichotomy(spec_, e));
    }
    return dich_;
  }

  const std::vector<ContractionBudget>& budgets() {
    if (budgets_.empty()) {
      const auto& eqs = equilibria(kLambda);
      for (std::size_t i = 0; i < eqs.size(); ++i) {
        budgets_.push_back(contraction_budget(spec_, eqs[i], dichotomies()[i], forcing(kEps)));
      }
    }
    return budgets_;
  }

  const std::vector<AlmostPeriodicSolution>& aps(double eps) {
    auto it = aps_.find(eps);
    if (it == aps_.end()) {
      std::vector<AlmostPeriodicSolution> sols;
      const auto& eqs = equilibria(kLambda);
      for (std::size_t i = 0; i < eqs.size(); ++i) {
        sols.push_back(
            picard_iterate(spec_, eqs[i], dichotomies()[i], forcing(eps), budgets()[i]));
      }
      it = aps_.emplace(eps, std::move(sols)).first;
    }
    return it->second;
  }

 private:
  const AcceptanceOptions& options_;
  SystemSpec spec_ = assemble_chafee_infante(kN, kLambda);
  std::map<double, std::vector<Equilibrium>> eqs_;
  std::vector<Dichotomy> dich_;
  std::vector<ContractionBudget> budgets_;
  std::map<double, std::vector<AlmostPeriodicSolution>> aps_;
};

using Check = void (*)(Context&, CriterionResult&);

// 1. Equilibrium counts 2 floor(sqrt(lambda)) + 1 with converged Newton.
void c1(Context& ctx, CriterionResult& r) {
  const double tol = ctx.tol("c1.newton_residual");
  const std::vector<std::pair<double, int>> cases = {{0.5, 1}, {2, 3}, {5, 5}, {8, 5}, {12, 7}};
  r.pass = true;
  json rows = json::array();
  std::ostringstream s;
  for (const auto& [lam, expected] : cases) {
    const auto& eqs = ctx.equilibria(lam);
    double worst = 0.0;
    for (const auto& e : eqs) worst = std::max(worst, e.newton_residual);
    const bool ok = static_cast<int>(eqs.size()) == expected && worst < tol &&
                    expected == chafee_infante_count(lam);
    r.pass = r.pass && ok;
    rows.push_back({{"lambda", lam},
                    {"count", eqs.size()},
                    {"expected", expected},
                    {"max_newton_residual", checked(worst, tol, worst < tol)}});
    s << "lambda=" << lam << ":" << eqs.size() << "/" << expected << " ";
  }
  r.details = {{"cases", rows}};
  s << "(residual tol " << fmt(tol) << ")";
  r.summary = s.str();
}

// 2. Spectral gaps at lambda = 5.
void c2(Context& ctx, CriterionResult& r) {
  const double tol = ctx.tol("c2.min_gap");
  const auto rep = hyperbolicity_report(ctx.equilibria(kLambda));
  r.pass = rep.min_gap > tol;
  r.details = {{"gaps", rep.gaps}, {"min_gap", checked(rep.min_gap, tol, r.pass)}};
  r.summary = "min gap " + fmt(rep.min_gap) + " > " + fmt(tol);
}

// 3. Max Morse index equals n and is attained at the origin.
void c3(Context& ctx, CriterionResult& r) {
  const std::vector<std::pair<double, int>> cases = {{5, 2}, {2, 1}, {12, 3}};
  r.pass = true;
  json rows = json::array();
  std::ostringstream s;
  for (const auto& [lam, expected] : cases) {
    const auto& eqs = ctx.equilibria(lam);
    int best = -1;
    double origin_norm = 0.0;
    for (const auto& e : eqs) {
      if (e.morse_index > best) {
        best = e.morse_index;
        origin_norm = e.state.norm();
      }
    }
    const bool ok = best == expected && origin_norm < 1e-12;
    r.pass = r.pass && ok;
    rows.push_back({{"lambda", lam},
                    {"max_morse", best},
                    {"expected", expected},
                    {"argmax_state_norm", checked(origin_norm, 1e-12, origin_norm < 1e-12)}});
    s << "lambda=" << lam << ":" << best << "/" << expected << " ";
  }
  r.details = {{"cases", rows}};
  s << "(attained at the origin)";
  r.summary = s.str();
}

// 4. Scalar Green's operator against the closed-form bounded solutions.
void c4(Context& ctx, CriterionResult& r) {
  const double tol = ctx.tol("c4.sup_error");
  const double eps = 0.1, L = 40.0, dt = 1e-3;
  const SourceFn source = [eps](const Vector& t, const Matrix&) -> Matrix {
    return (eps * t.array().cos()).matrix().transpose();
  };
  r.pass = true;
  json rows = json::array();
  std::ostringstream s;
  for (double a : {1.0, -1.0}) {
    const Dichotomy d = build_dichotomy_from_matrix(Matrix::Constant(1, 1, a), Vector::Ones(1), 0.0);
    const FixedPointResult fp =
        solve_fixed_point(d, source, L, make_orbit_grid(1, 0.0, 20.0, dt, L), 1e-12, 50);
    double err = 0.0;
    for (Eigen::Index j = fp.y.inner_lo; j <= fp.y.inner_hi; ++j) {
      const double t = fp.y.time(j);
      const double exact = a > 0 ? eps * (std::cos(t) + std::sin(t)) / 2
                                 : eps * (std::sin(t) - std::cos(t)) / 2;
      err = std::max(err, std::abs(fp.y.values(0, j) - exact));
    }
    r.pass = r.pass && err < tol;
    rows.push_back({{"A", a}, {"sup_error", checked(err, tol, err < tol)}});
    s << (a > 0 ? "stable " : "unstable ") << fmt(err) << " ";
  }
  r.details = {{"cases", rows}, {"epsilon", eps}, {"dt", dt}, {"L", L}};
  s << "< " << fmt(tol);
  r.summary = s.str();
}

// 5. Lipschitz ratio of F on random orbit pairs in the delta0-ball.
void c5(Context& ctx, CriterionResult& r) {
  const double tol = ctx.tol("c5.lipschitz");
  const auto& eqs = ctx.equilibria(kLambda);
  double worst = 0.0, image = 0.0;
  json rows = json::array();
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    const auto probe = probe_contraction(ctx.spec(), eqs[i], ctx.dichotomies()[i],
                                         ctx.forcing(kEps), ctx.budgets()[i], 6, ctx.seed() + i);
    worst = std::max(worst, probe.max_lipschitz);
    image = std::max(image, probe.max_image_radius);
    rows.push_back({{"morse_index", eqs[i].morse_index},
                    {"delta0", ctx.budgets()[i].delta0},
                    {"lipschitz", checked(probe.max_lipschitz, tol, probe.max_lipschitz <= tol)},
                    {"image_radius_over_delta0", checked(probe.max_image_radius, 1.0,
                                                         probe.max_image_radius <= 1.0)}});
  }
  r.pass = worst <= tol && image <= 1.0;
  r.details = {{"equilibria", rows}};
  r.summary = "max Lipschitz ratio " + fmt(worst) + " <= " + fmt(tol) +
              ", max sup||F y||/delta0 " + fmt(image);
}

// 6. One AP solution per equilibrium, residuals and uniqueness.
void c6(Context& ctx, CriterionResult& r) {
  const double tol_ode = ctx.tol("c6.ode_residual");
  const double tol_fp = ctx.tol("c6.fixed_point_residual");
  const auto& eqs = ctx.equilibria(kLambda);
  const auto& aps = ctx.aps(kEps);
  r.pass = aps.size() == 5;
  json rows = json::array();
  double worst_ode = 0.0, worst_fp = 0.0;
  bool unique = true;
  for (std::size_t i = 0; i < aps.size(); ++i) {
    const auto u = uniqueness_probe(ctx.spec(), eqs[i], ctx.dichotomies()[i], ctx.forcing(kEps),
                                    ctx.budgets()[i], 8, ctx.seed() + 100 + i);
    worst_ode = std::max(worst_ode, aps[i].ode_residual);
    worst_fp = std::max(worst_fp, aps[i].fixed_point_residual);
    unique = unique && u.unique;
    rows.push_back(
        {{"morse_index", eqs[i].morse_index},
         {"picard_iterations", aps[i].picard_iterations},
         {"ode_residual", checked(aps[i].ode_residual, tol_ode, aps[i].ode_residual < tol_ode)},
         {"fixed_point_residual",
          checked(aps[i].fixed_point_residual, tol_fp, aps[i].fixed_point_residual < tol_fp)},
         {"uniqueness_max_distance", checked(u.max_distance, u.tolerance, u.unique)},
         {"starts", u.starts}});
  }
  // Distinct orbits: pairwise separation well above the solver tolerance.
  double min_sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < aps.size(); ++i) {
    for (std::size_t j = i + 1; j < aps.size(); ++j) {
      min_sep = std::min(min_sep, inner_distance(aps[i].orbit, aps[j].orbit,
                                                 ctx.spec().alpha_weights()));
    }
  }
  r.pass = r.pass && worst_ode < tol_ode && worst_fp < tol_fp && unique && min_sep > 1e-3;
  r.details = {{"orbits", rows}, {"min_pairwise_separation", checked(min_sep, 1e-3, min_sep > 1e-3)}};
  r.summary = std::to_string(aps.size()) + " orbits, ode residual " + fmt(worst_ode) +
              ", fixed-point residual " + fmt(worst_fp) + ", unique (8 starts) " +
              (unique ? "yes" : "no");
}

// Bounded solution of y' + A y = g_eps(t) evaluated per frequency.
Matrix linear_response(const Matrix& A, const QuasiPeriodicForcing& f, const OrbitGrid& grid,
                       int stride) {
  const Eigen::Index n = A.rows();
  std::vector<Eigen::VectorXcd> modes;
  for (std::size_t j = 0; j < f.frequencies.size(); ++j) {
    Eigen::MatrixXcd M = A.cast<std::complex<double>>();
    M.diagonal().array() += std::complex<double>(0.0, f.frequencies[j]);
    const Eigen::VectorXcd rhs = (f.epsilon * f.amplitudes[j] *
                                  std::polar(1.0, f.phases[j])) *
                                 f.profile.cast<std::complex<double>>();
    modes.push_back(M.partialPivLu().solve(rhs));
  }
  const Eigen::Index count = (grid.inner_hi - grid.inner_lo) / stride + 1;
  Matrix Y = Matrix::Zero(n, count);
  for (Eigen::Index c = 0; c < count; ++c) {
    const double t = grid.time(grid.inner_lo + c * stride);
    for (std::size_t j = 0; j < modes.size(); ++j) {
      Y.col(c) += (std::polar(1.0, f.frequencies[j] * t) * modes[j]).real();
    }
  }
  return Y;
}

// 7. Linear response as epsilon -> 0.
void c7(Context& ctx, CriterionResult& r) {
  const double lo = ctx.tol("c7.ratio_lo"), hi = ctx.tol("c7.ratio_hi");
  const double rel_tol = ctx.tol("c7.linear_oracle_rel");
  const std::vector<double> eps_list = {1e-4, 1e-3, 1e-2};
  const auto& eqs = ctx.equilibria(kLambda);
  const Vector& w = ctx.spec().alpha_weights();
  const int stride = 10;
  r.pass = true;
  json rows = json::array();
  double worst_rel = 0.0, ratio_min = 1e300, ratio_max = 0.0;
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    const auto& d = ctx.dichotomies()[i];
    const auto& b = ctx.budgets()[i];
    std::vector<double> devs;
    std::vector<double> rels;
    bool below = true;
    for (double eps : eps_list) {
      const auto f = ctx.forcing(eps);
      const auto sol = picard_iterate(ctx.spec(), eqs[i], d, f, b);
      devs.push_back(sol.deviation);
      below = below && sol.deviation <= b.delta0;
      const OrbitGrid y = sol.deviation_orbit();
      const Matrix lin = linear_response(d.A, f, y, stride);
      double diff = 0.0, scale = 0.0;
      for (Eigen::Index c = 0; c < lin.cols(); ++c) {
        const auto col = y.values.col(y.inner_lo + c * stride);
        diff = std::max(diff, weighted_norm(w, col - lin.col(c)));
        scale = std::max(scale, weighted_norm(w, lin.col(c)));
      }
      rels.push_back(diff / scale);
      worst_rel = std::max(worst_rel, diff / scale);
    }
    bool monotone = true;
    std::vector<double> ratios;
    for (std::size_t k = 0; k + 1 < devs.size(); ++k) {
      monotone = monotone && devs[k] < devs[k + 1];
      ratios.push_back(devs[k] / devs[k + 1]);
      ratio_min = std::min(ratio_min, ratios.back());
      ratio_max = std::max(ratio_max, ratios.back());
    }
    bool ratios_ok = true;
    for (double q : ratios) ratios_ok = ratios_ok && q >= lo && q <= hi;
    bool oracle_ok = true;
    for (double q : rels) oracle_ok = oracle_ok && q <= rel_tol;
    r.pass = r.pass && below && monotone && ratios_ok && oracle_ok;
    rows.push_back({{"morse_index", eqs[i].morse_index},
                    {"epsilon", eps_list},
                    {"deviation", devs},
                    {"delta0", b.delta0},
                    {"monotone", monotone},
                    {"within_delta0", below},
                    {"ratios_per_decade", ratios},
                    {"ratio_bounds", {lo, hi}},
                    {"linear_oracle_relative_error", rels},
                    {"linear_oracle_tolerance", rel_tol}});
  }
  r.details = {{"equilibria", rows}};
  r.summary = "decade ratios in [" + fmt(ratio_min) + ", " + fmt(ratio_max) + "], linear oracle rel error " +
              fmt(worst_rel) + " <= " + fmt(rel_tol);
}

// 8. Bohr spectrum concentration and relative density of almost periods.
void c8(Context& ctx, CriterionResult& r) {
  const double conc_tol = ctx.tol("c8.concentration");
  const double frac = ctx.tol("c8.delta_fraction");
  const double l_tol = ctx.tol("c8.inclusion_length");
  const auto& aps = ctx.aps(kEps);
  const Vector& w = ctx.spec().alpha_weights();
  const std::vector<double> gens = {1.0, std::sqrt(2.0)};
  r.pass = true;
  json rows = json::array();
  double worst_conc = 1.0, worst_l = 0.0;
  for (const auto& ap : aps) {
    const OrbitGrid y = ap.deviation_orbit();
    const double conc = spectrum_concentration(signal_from_orbit(y, w, 1), gens, 3);

    const SampledSignal orbit = signal_from_orbit(ap.orbit, w, 10);
    const double half = 0.5 * orbit.duration();
    const double norm = ap.orbit.inner_sup(w);
    const auto periods = almost_periods(orbit, frac * norm, -half, half);
    const double l = inclusion_length(periods, -half, half);
    const bool dense = relative_density_check(periods, l_tol, -half, half);

    const SampledSignal dev = signal_from_orbit(y, w, 10);
    const auto dev_periods = almost_periods(dev, frac * y.inner_sup(w), -half, half);
    const double l_dev = inclusion_length(dev_periods, -half, half);

    const bool ok = conc >= conc_tol && dense && l < l_tol;
    r.pass = r.pass && ok;
    worst_conc = std::min(worst_conc, conc);
    worst_l = std::max(worst_l, l);
    rows.push_back({{"morse_index", ap.base_equilibrium.morse_index},
                    {"concentration", checked(conc, conc_tol, conc >= conc_tol)},
                    {"orbit_sup_norm", norm},
                    {"delta", frac * norm},
                    {"almost_periods_found", periods.size()},
                    {"inclusion_length", checked(l, l_tol, l < l_tol)},
                    {"deviation_inclusion_length", l_dev},
                    {"window", {-half, half}}});
  }
  r.details = {{"orbits", rows}, {"T", 2.0 * aps.front().orbit.inner_end()}};
  r.summary = "min concentration " + fmt(worst_conc) + " >= " + fmt(conc_tol) +
              ", max inclusion length " + fmt(worst_l) + " (< " + fmt(l_tol) + " required)";
}

// 9. Every seeded trajectory converges to one of the AP orbits.
void c9(Context& ctx, CriterionResult& r) {
  const double tol = ctx.tol("c9.classify_tol");
  const auto& aps = ctx.aps(kEps);
  const Matrix X0 = sample_alpha_ball(ctx.spec(), 3.0, 50, ctx.seed());
  const auto cls =
      classify_bundle(ctx.spec(), ctx.forcing(kEps), aps, X0, 0.0, 40.0, 160.0, 20.0, tol);
  std::vector<int> hist(aps.size(), 0);
  int unresolved = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < cls.labels.size(); ++i) {
    if (cls.labels[i]) {
      ++hist[static_cast<std::size_t>(*cls.labels[i])];
      worst = std::max(worst, cls.distances[i]);
    } else {
      ++unresolved;
    }
  }
  bool stable_basins = true;
  json basins = json::array();
  for (std::size_t a = 0; a < aps.size(); ++a) {
    const int m = aps[a].base_equilibrium.morse_index;
    if (m == 0 && hist[a] == 0) stable_basins = false;
    basins.push_back({{"morse_index", m}, {"count", hist[a]}});
  }
  r.pass = unresolved == 0 && stable_basins;
  r.details = {{"samples", cls.labels.size()},
               {"unresolved", unresolved},
               {"basins", basins},
               {"max_trailing_distance", checked(worst, tol, worst < tol)}};
  std::ostringstream s;
  s << (cls.labels.size() - unresolved) << "/" << cls.labels.size() << " resolved, basins";
  for (int h : hist) s << " " << h;
  s << ", max trailing distance " << fmt(worst) << " < " << fmt(tol);
  r.summary = s.str();
}

// 10. Pullback cloud against the union of unstable manifolds.
void c10(Context& ctx, CriterionResult& r) {
  const double s_tol = ctx.tol("c10.structure_tol");
  const double c_tol = ctx.tol("c10.cloud_tol");
  const std::vector<double> radii = {1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4};
  r.pass = true;
  json rows = json::array();
  std::ostringstream s;
  for (double eps : {0.0, kEps}) {
    const auto f = ctx.forcing(eps);
    const auto& aps = ctx.aps(eps);
    try {
      const auto cloud = pullback_attractor_sample(ctx.spec(), f, 0.0, InitBox{},
                                                   {5.0, 10.0, 20.0, 40.0}, 1e-2, c_tol);
      std::vector<ManifoldSample> manifolds;
      for (std::size_t i = 0; i < aps.size(); ++i) {
        manifolds.push_back(unstable_manifold_union(ctx.spec(), f, aps[i], ctx.dichotomies()[i],
                                                    0.0, 24, radii, 10.0));
      }
      const auto rep = structure_check(ctx.spec(), cloud, manifolds, s_tol);
      const double last = cloud.distances.back();
      r.pass = r.pass && rep.within_tolerance && last < c_tol && rep.dimension_proxy == 2;
      rows.push_back({{"epsilon", eps},
                      {"depths", cloud.depths},
                      {"cloud_distances", cloud.distances},
                      {"cloud_converged", checked(last, c_tol, last < c_tol)},
                      {"structure_distance", checked(rep.distance, s_tol, rep.within_tolerance)},
                      {"dimension_proxy", rep.dimension_proxy},
                      {"cloud_points", cloud.points.cols()}});
      s << "eps=" << eps << ": distance " << fmt(rep.distance) << ", depth "
        << cloud.pullback_depth << "; ";
    } catch (const ConvergenceError& e) {
      r.pass = false;
      rows.push_back({{"epsilon", eps}, {"error", e.what()}});
      s << "eps=" << eps << ": " << e.what() << "; ";
    }
  }
  r.details = {{"runs", rows}};
  s << "tol " << fmt(s_tol);
  r.summary = s.str();
}

// 11. V decreases along autonomous trajectories and is stationary at equilibria.
void c11(Context& ctx, CriterionResult& r) {
  const double slack = ctx.tol("c11.liapunov_slack");
  const double stat_tol = ctx.tol("c11.stationarity");
  const SystemSpec& spec = ctx.spec();
  const auto f0 = ctx.forcing(0.0);
  const Matrix X0 = sample_alpha_ball(spec, 3.0, 20, ctx.seed() + 7);
  double worst_increase = -1e300;
  for (Eigen::Index c = 0; c < X0.cols(); ++c) {
    const Trajectory tr = integrate(spec, f0, 0.0, X0.col(c), 10.0, 1e-2);
    double prev = liapunov_value(spec, tr.states.col(0));
    for (Eigen::Index j = 1; j < tr.size(); ++j) {
      const double v = liapunov_value(spec, tr.states.col(j));
      worst_increase = std::max(worst_increase, v - prev);
      prev = v;
    }
  }
  double worst_grad = 0.0, worst_drift = 0.0;
  for (const auto& e : ctx.equilibria(kLambda)) {
    worst_grad = std::max(worst_grad, liapunov_gradient(spec, e.state).norm());
    const Trajectory tr = integrate(spec, f0, 0.0, e.state, 5.0, 1e-2);
    for (Eigen::Index j = 0; j < tr.size(); ++j) {
      worst_drift = std::max(worst_drift, (tr.states.col(j) - e.state).norm());
    }
  }
  r.pass = worst_increase <= slack && worst_grad < stat_tol && worst_drift < stat_tol;
  r.details = {{"trajectories", X0.cols()},
               {"max_step_increase", checked(worst_increase, slack, worst_increase <= slack)},
               {"max_gradient_at_equilibria", checked(worst_grad, stat_tol, worst_grad < stat_tol)},
               {"max_drift_from_equilibria", checked(worst_drift, stat_tol, worst_drift < stat_tol)}};
  r.summary = "max per-step increase of V " + fmt(worst_increase) + " <= " + fmt(slack) +
              ", |grad V| at equilibria " + fmt(worst_grad);
}

// 12. Projection identities and dichotomy constants.
void c12(Context& ctx, CriterionResult& r) {
  const double p_tol = ctx.tol("c12.projection");
  const double m_tol = ctx.tol("c12.constant");
  const auto& eqs = ctx.equilibria(kLambda);
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(std::pow(10.0, -4.0 + 5.0 * i / 49.0));
  r.pass = true;
  json rows = json::array();
  double worst_p = 0.0, worst_m = 0.0, min_need = 1e300;
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    const Dichotomy& d = ctx.dichotomies()[i];
    const Matrix& P = d.projection;
    const double idem = (P * P - P).cwiseAbs().maxCoeff();
    const double comm = (P * d.A - d.A * P).cwiseAbs().maxCoeff();
    const double rank_err = std::abs(P.trace() - eqs[i].morse_index);
    const bool rank_ok = d.rank == eqs[i].morse_index && rank_err < p_tol;

    const Dichotomy flat = build_dichotomy_from_matrix(d.A, Vector::Ones(d.dimension()), 0.0);
    const double m_err = std::max(std::abs(flat.M - 1.0), std::abs(flat.M1 - 1.0));

    const auto rep = verify_dichotomy_bounds(d, grid);
    const bool bound_ok = rep.M1_stable <= d.M1 * (1.0 + 1e-9);
    const double need = rep.M1_stable_without_singular_factor / d.M1;

    const bool ok = idem < p_tol && comm < p_tol && rank_ok && m_err < m_tol && bound_ok &&
                    need > 2.0;
    r.pass = r.pass && ok;
    worst_p = std::max({worst_p, idem, comm, rank_err});
    worst_m = std::max(worst_m, m_err);
    min_need = std::min(min_need, need);
    rows.push_back({{"morse_index", eqs[i].morse_index},
                    {"idempotence", checked(idem, p_tol, idem < p_tol)},
                    {"commutation", checked(comm, p_tol, comm < p_tol)},
                    {"rank", d.rank},
                    {"trace_error", checked(rank_err, p_tol, rank_ok)},
                    {"M_M1_deviation_from_1_euclidean", checked(m_err, m_tol, m_err < m_tol)},
                    {"M1_alpha", d.M1},
                    {"M1_on_log_grid", checked(rep.M1_stable, d.M1, bound_ok)},
                    {"ratio_without_singular_factor", checked(need, 2.0, need > 2.0)}});
  }
  r.details = {{"equilibria", rows}, {"t_grid", {grid.front(), grid.back(), grid.size()}}};
  r.summary = "projection errors " + fmt(worst_p) + ", |M-1|,|M1-1| " + fmt(worst_m) +
              ", t^-a factor needed (ratio >= " + fmt(min_need) + ")";
}

struct Entry {
  int id;
  const char* name;
  Check run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {1, "equilibrium-counts", c1},     {2, "hyperbolicity", c2},
      {3, "dimension-proxy", c3},        {4, "scalar-greens-oracles", c4},
      {5, "contraction-bound", c5},      {6, "ap-solutions", c6},
      {7, "epsilon-convergence", c7},    {8, "almost-periodicity", c8},
      {9, "trajectory-classification", c9}, {10, "attractor-structure", c10},
      {11, "gradient-structure", c11},   {12, "dichotomy-estimates", c12},
  };
  return entries;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options,
    const std::function<void(const CriterionResult&)>& on_result) {
  for (int id : options.only) {
    if (id < 1 || id > static_cast<int>(registry().size())) {
      throw ConfigError("validate: unknown criterion " + std::to_string(id));
    }
  }
  Context ctx(options);
  std::vector<CriterionResult> results;
  for (const auto& e : registry()) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), e.id) == options.only.end()) {
      continue;
    }
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    const auto start = std::chrono::steady_clock::now();
    try {
      e.run(ctx, r);
    } catch (const std::exception& ex) {
      r.pass = false;
      r.summary = std::string("error: ") + ex.what();
      r.details = {{"error", ex.what()}};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result_line(const CriterionResult& r) {
  char id[8];
  std::snprintf(id, sizeof id, "C%02d", r.id);
  return std::string(r.pass ? "[PASS] " : "[FAIL] ") + id + " " + r.name + ": " + r.summary;
}

json results_json(const std::vector<CriterionResult>& results) {
  json arr = json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary},
                   {"details", r.details}});
  }
  return {{"version", kVersion}, {"all_passed", all}, {"criteria", arr}};
}

}  // namespace apdyn
