#include "apdyn/ap_solver.hpp"

#include "apdyn/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace apdyn {

// ---------------------------------------------------------------------------
// OrbitGrid

Vector OrbitGrid::at(double t) const {
  const double last = time(size() - 1);
  if (size() == 0 || t < t0 - 1e-12 * std::abs(dt) || t > last + 1e-12 * std::abs(dt)) {
    throw DomainError("OrbitGrid::at: time outside the stored window");
  }
  const double s = std::clamp((t - t0) / dt, 0.0, static_cast<double>(size() - 1));
  const auto j = std::min<Eigen::Index>(static_cast<Eigen::Index>(s), size() - 2);
  if (size() == 1) return values.col(0);
  const double w = s - static_cast<double>(j);
  return (1.0 - w) * values.col(j) + w * values.col(j + 1);
}

double OrbitGrid::inner_sup(const Vector& weights) const {
  double best = 0.0;
  for (Eigen::Index j = inner_lo; j <= inner_hi; ++j) {
    best = std::max(best, weighted_norm(weights, values.col(j)));
  }
  return best;
}

OrbitGrid make_orbit_grid(int N, double inner_start, double inner_end, double dt, double tail) {
  if (N < 1) throw DomainError("make_orbit_grid: dimension must be positive");
  if (!(dt > 0.0)) throw DomainError("make_orbit_grid: dt must be positive");
  if (!(inner_end > inner_start)) throw DomainError("make_orbit_grid: empty inner window");
  if (!(tail >= 0.0)) throw DomainError("make_orbit_grid: tail must be nonnegative");
  const auto n_tail = static_cast<Eigen::Index>(std::ceil(tail / dt - 1e-9));
  const auto n_inner = static_cast<Eigen::Index>(std::llround((inner_end - inner_start) / dt));
  OrbitGrid g;
  g.dt = dt;
  g.t0 = inner_start - static_cast<double>(n_tail) * dt;
  g.inner_lo = n_tail;
  g.inner_hi = n_tail + n_inner;
  g.values = Matrix::Zero(N, n_inner + 1 + 2 * n_tail);
  return g;
}

double inner_distance(const OrbitGrid& a, const OrbitGrid& b, const Vector& weights) {
  const Eigen::Index n = a.inner_hi - a.inner_lo;
  if (a.values.rows() != b.values.rows() || n != b.inner_hi - b.inner_lo ||
      std::abs(a.dt - b.dt) > 1e-12 * a.dt ||
      std::abs(a.inner_start() - b.inner_start()) > 1e-9 * std::max(1.0, a.dt)) {
    throw DomainError("inner_distance: inner windows differ");
  }
  double best = 0.0;
  for (Eigen::Index j = 0; j <= n; ++j) {
    best = std::max(best, weighted_norm(weights, a.values.col(a.inner_lo + j) -
                                                    b.values.col(b.inner_lo + j)));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Green's operator

double tail_length(double beta, double tail_tol) {
  if (!(beta > 0.0)) throw DomainError("tail_length: beta must be positive");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw DomainError("tail_length: tail_tol must be in (0, 1)");
  return std::log(1.0 / tail_tol) / beta;
}

namespace {

// Exact integrals of the kernel against the hat functions of one step:
// with x = |mu| h, E = e^{-x},
//   i0 = int_0^h e^{-|mu| s} ds,  i1 = (1/h) int_0^h s e^{-|mu| s} ds.
struct StepWeights {
  double decay;
  double i0;
  double i1;
};

StepWeights step_weights(double abs_mu, double h) {
  const double x = abs_mu * h;
  StepWeights w{std::exp(-x), 0.0, 0.0};
  if (x < 0.1) {
    // (1 - E)/x = sum (-x)^n/(n+1)!,  (1 - E - xE)/x^2 = sum (n+1)(-x)^n/(n+2)!
    double a = 0.0, c = 0.0, term = 1.0;  // term = (-x)^n / n!
    for (int n = 0; n < 14; ++n) {
      a += term / (n + 1);
      c += term / (n + 2);
      term *= -x / (n + 1);
    }
    w.i0 = h * a;
    w.i1 = h * c;
  } else {
    w.i0 = h * (-std::expm1(-x)) / x;
    w.i1 = h * (-std::expm1(-x) - x * w.decay) / (x * x);
  }
  return w;
}

}  // namespace

OrbitGrid apply_greens(const Dichotomy& d, const SourceFn& source, double tail,
                       const OrbitGrid& y) {
  if (!d.symmetric) {
    throw DomainError("apply_greens: requires a symmetric linearization");
  }
  const Eigen::Index n = y.size();
  const int N = d.dimension();
  if (y.values.rows() != N) throw DomainError("apply_greens: orbit has wrong dimension");
  const double window = static_cast<double>(n - 1) * y.dt;
  if (n < 2 || window + 1e-9 * y.dt < 2.0 * tail) {
    std::ostringstream msg;
    msg << "apply_greens: stored window " << window << " is shorter than the required "
        << 2.0 * tail << " (twice the tail length)";
    throw DomainError(msg.str());
  }

  const double h = y.dt;
  const auto ext = static_cast<Eigen::Index>(std::ceil(tail / h - 1e-9));
  const Eigen::Index total = n + 2 * ext;

  Vector times(total);
  Matrix states(N, total);
  for (Eigen::Index j = 0; j < total; ++j) {
    times[j] = y.t0 + static_cast<double>(j - ext) * h;
    const Eigen::Index src = std::clamp<Eigen::Index>(j - ext, 0, n - 1);
    states.col(j) = y.values.col(src);
  }
  const Matrix phi = source(times, states);
  if (phi.rows() != N || phi.cols() != total) {
    throw DomainError("apply_greens: source returned a block of the wrong shape");
  }
  // Modal coordinates, one row per eigenvalue; rows are walked contiguously.
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor C = d.eigenvectors.transpose() * phi;
  RowMajor Z = RowMajor::Zero(N, total);

  for (int i = 0; i < N; ++i) {
    const double mu = d.eigenvalues[i];
    const StepWeights w = step_weights(std::abs(mu), h);
    const double left = w.i0 - w.i1;  // weight of the node where the kernel is 1
    const double right = w.i1;
    if (mu > 0.0) {
      double z = 0.0;
      for (Eigen::Index j = 0; j + 1 < total; ++j) {
        z = w.decay * z + right * C(i, j) + left * C(i, j + 1);
        Z(i, j + 1) = z;
      }
    } else {
      double z = 0.0;
      for (Eigen::Index j = total - 1; j > 0; --j) {
        z = w.decay * z - (left * C(i, j - 1) + right * C(i, j));
        Z(i, j - 1) = z;
      }
    }
  }

  OrbitGrid out = y;
  out.values = d.eigenvectors * Z.middleCols(ext, n);
  return out;
}

// ---------------------------------------------------------------------------
// Remainder and source

Vector remainder_h(const SystemSpec& spec, const Equilibrium& eq, const Vector& y) {
  if (y.size() != spec.N() || eq.state.size() != spec.N()) {
    throw DomainError("remainder_h: vector has wrong length");
  }
  return nonlinearity(spec, y + eq.state) - nonlinearity(spec, eq.state) -
         jacobian(spec, eq.state) * y;
}

Matrix remainder_batch(const SystemSpec& spec, const Equilibrium& eq, const Matrix& Y) {
  if (Y.rows() != spec.N() || eq.state.size() != spec.N()) {
    throw DomainError("remainder_batch: block has wrong row count");
  }
  if (spec.cubic() == 0.0) return Matrix::Zero(Y.rows(), Y.cols());
  const Vector ustar = spec.synthesis() * eq.state;
  const Matrix V = spec.synthesis() * Y;
  Matrix R(V.rows(), V.cols());
  const double s = -spec.lambda() * spec.cubic();
  for (Eigen::Index k = 0; k < V.cols(); ++k) {
    R.col(k) = s * V.col(k).array().square() * (3.0 * ustar.array() + V.col(k).array());
  }
  return spec.analysis() * R;
}

SourceFn perturbation_source(const SystemSpec& spec, const Equilibrium& eq,
                             const QuasiPeriodicForcing& forcing) {
  validate_forcing(forcing, spec.N());
  return [spec, eq, forcing](const Vector& times, const Matrix& states) -> Matrix {
    Matrix phi = remainder_batch(spec, eq, states);
    if (forcing.epsilon != 0.0) {
      Eigen::RowVectorXd g(times.size());
      for (Eigen::Index j = 0; j < times.size(); ++j) {
        g[j] = forcing.epsilon * forcing.signal(times[j]);
      }
      phi.noalias() += forcing.profile * g;
    }
    return phi;
  };
}

// ---------------------------------------------------------------------------
// Contraction budget

double remainder_derivative_norm(const SystemSpec& spec, const Equilibrium& eq, const Vector& x) {
  if (x.size() != spec.N()) throw DomainError("remainder_derivative_norm: wrong length");
  const Matrix B = (jacobian(spec, eq.state + x) - jacobian(spec, eq.state)) *
                   spec.alpha_weights().cwiseInverse().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(B.transpose() * B, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

namespace {

// Unit directions of the alpha-sphere used to sample the remainder derivative.
std::vector<Vector> sphere_directions(const SystemSpec& spec, const BudgetOptions& options) {
  const int N = spec.N();
  const Vector& w = spec.alpha_weights();
  std::vector<Vector> dirs;
  for (int k = 0; k < N; ++k) {
    for (double sign : {1.0, -1.0}) {
      Vector v = Vector::Zero(N);
      v[k] = sign / w[k];
      dirs.push_back(v);
    }
  }
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  const int low = std::min(N, 4);
  for (int r = 0; r < options.random_directions; ++r) {
    Vector z(N);
    for (int k = 0; k < N; ++k) z[k] = gauss(rng);
    dirs.push_back(z.cwiseQuotient(w) / z.norm());
    Vector q = Vector::Zero(N);
    for (int k = 0; k < low; ++k) q[k] = gauss(rng);
    dirs.push_back(q.cwiseQuotient(w) / q.norm());
  }
  return dirs;
}

double sphere_sup(const SystemSpec& spec, const Equilibrium& eq, double radius,
                  const std::vector<Vector>& dirs, const BudgetOptions& options) {
  const Vector& w = spec.alpha_weights();
  std::vector<std::pair<double, Eigen::Index>> scored;
  scored.reserve(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    scored.emplace_back(remainder_derivative_norm(spec, eq, radius * dirs[i]),
                        static_cast<Eigen::Index>(i));
  }
  std::sort(scored.begin(), scored.end(), std::greater<>());
  double best = scored.empty() ? 0.0 : scored.front().first;

  // Random-perturbation ascent in alpha coordinates from the two best points.
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss;
  const int N = spec.N();
  for (std::size_t s = 0; s < std::min<std::size_t>(2, scored.size()); ++s) {
    Vector z = dirs[scored[s].second].cwiseProduct(w);  // unit in Euclidean norm
    double value = scored[s].first;
    double step = 0.2;
    for (int it = 0; it < options.refine_steps; ++it) {
      Vector trial = z;
      for (int k = 0; k < N; ++k) trial[k] += step * gauss(rng);
      trial /= trial.norm();
      const double v = remainder_derivative_norm(spec, eq, radius * trial.cwiseQuotient(w));
      if (v > value) {
        value = v;
        z = trial;
      } else {
        step *= 0.85;
      }
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace

double sampled_remainder_sup(const SystemSpec& spec, const Equilibrium& eq, double radius,
                             const BudgetOptions& options) {
  if (eq.state.size() != spec.N()) throw DomainError("sampled_remainder_sup: wrong length");
  return sphere_sup(spec, eq, radius, sphere_directions(spec, options), options);
}

ContractionBudget contraction_budget(const SystemSpec& spec, const Equilibrium& eq,
                                     const Dichotomy& d, const QuasiPeriodicForcing& family,
                                     const BudgetOptions& options) {
  if (eq.state.size() != spec.N()) throw DomainError("contraction_budget: wrong length");
  if (!(eq.gap > 0.0) || !(d.beta > 0.0)) {
    throw DomainError("contraction_budget: equilibrium is not hyperbolic");
  }
  validate_forcing(family, spec.N());

  ContractionBudget b;
  b.beta = d.beta;
  b.M1 = d.M1;
  b.alpha = spec.alpha();
  b.gamma_factor = std::tgamma(1.0 - b.alpha);
  const double beta = b.beta, M1 = b.M1, G = b.gamma_factor, a = b.alpha;
  const double c1 = beta / (8.0 * M1);
  const double c2 = std::pow(beta, 1.0 - a) / (8.0 * M1 * G);
  const double c3 = 1.0 / (2.0 * M1 * (4.0 / beta + 2.0 * std::pow(beta, a - 1.0) * G));
  b.h_bound = std::min({c1, c2, c3});

  const auto dirs = sphere_directions(spec, options);
  auto sup_at = [&](double r) { return sphere_sup(spec, eq, r, dirs, options); };

  double sup1 = sup_at(1.0);
  if (sup1 < b.h_bound) {
    b.delta1 = 1.0;
    b.sampled_h_sup = sup1;
  } else {
    double lo = 0.0, hi = 1.0, sup_lo = 0.0;
    for (int it = 0; it < options.bisection_steps; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double s = sup_at(mid);
      if (s < b.h_bound) {
        lo = mid;
        sup_lo = s;
      } else {
        hi = mid;
      }
    }
    if (!(lo > 0.0)) {
      throw DomainError("contraction_budget: no admissible ball radius found");
    }
    b.delta1 = lo;
    b.sampled_h_sup = sup_lo;
  }
  b.delta0 = std::min(1.0, b.delta1);
  b.forcing_ball_bound = b.delta0 * std::min(c1, c2);

  // The forcing is independent of the state, so the derivative condition
  // holds for every epsilon and only the uniform bound limits epsilon.
  const double unit = family.with_epsilon(1.0).uniform_bound();
  if (unit == 0.0) {
    b.eps_threshold = std::numeric_limits<double>::infinity();
  } else {
    auto admissible = [&](double eps) {
      return family.with_epsilon(eps).uniform_bound() < b.forcing_ball_bound;
    };
    double lo = 0.0, hi = 1.0;
    while (admissible(hi)) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (admissible(mid) ? lo : hi) = mid;
    }
    b.eps_threshold = hi;
  }
  return b;
}

// ---------------------------------------------------------------------------
// Picard iteration

OrbitGrid greens_operator(const SystemSpec& spec, const Equilibrium& eq, const Dichotomy& d,
                          const QuasiPeriodicForcing& forcing, const OrbitGrid& y,
                          double tail_tol) {
  return apply_greens(d, perturbation_source(spec, eq, forcing), tail_length(d.beta, tail_tol), y);
}

FixedPointResult solve_fixed_point(const Dichotomy& d, const SourceFn& source, double tail,
                                   OrbitGrid y, double tol, int max_iter) {
  if (!(tol > 0.0)) throw DomainError("solve_fixed_point: tol must be positive");
  if (max_iter < 1) throw DomainError("solve_fixed_point: max_iter must be positive");
  FixedPointResult result;
  double previous = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    OrbitGrid next = apply_greens(d, source, tail, y);
    const double step = inner_distance(next, y, d.norm_weights);
    if (!std::isfinite(step)) {
      throw DivergenceError("Picard iteration produced a non-finite iterate");
    }
    result.steps.push_back(step);
    y = std::move(next);
    result.iterations = it;
    result.last_step = step;
    if (previous > 0.0 && step > tol) {
      const double ratio = step / previous;
      result.contraction_factor = std::max(result.contraction_factor, ratio);
      if (ratio >= 1.0) {
        std::ostringstream msg;
        msg << "Picard iteration is not contracting (step ratio " << ratio << " at iteration "
            << it << ")";
        throw DivergenceError(msg.str());
      }
    }
    if (step < tol) {
      result.y = std::move(y);
      return result;
    }
    previous = step;
  }
  std::ostringstream msg;
  msg << "Picard iteration did not reach tolerance " << tol << " in " << max_iter
      << " iterations (last step " << result.last_step << ")";
  throw DivergenceError(msg.str());
}

namespace {

void require_admissible(const QuasiPeriodicForcing& forcing, const ContractionBudget& budget) {
  if (!(forcing.epsilon < budget.eps_threshold)) {
    std::ostringstream msg;
    msg << "epsilon " << forcing.epsilon << " is not below the contraction threshold "
        << budget.eps_threshold;
    throw BudgetError(msg.str(), forcing.epsilon, budget.eps_threshold);
  }
}

OrbitGrid grid_for(const SystemSpec& spec, const Dichotomy& d, const ApGridOptions& grid) {
  return make_orbit_grid(spec.N(), grid.inner_start, grid.inner_end, grid.dt,
                         tail_length(d.beta, grid.tail_tol));
}

}  // namespace

OrbitGrid AlmostPeriodicSolution::deviation_orbit() const {
  OrbitGrid y = orbit;
  y.values.colwise() -= base_equilibrium.state;
  return y;
}

AlmostPeriodicSolution picard_iterate(const SystemSpec& spec, const Equilibrium& eq,
                                      const Dichotomy& d, const QuasiPeriodicForcing& forcing,
                                      const ContractionBudget& budget, const ApGridOptions& grid,
                                      double tol, int max_iter) {
  if (eq.state.size() != spec.N()) throw DomainError("picard_iterate: wrong length");
  require_admissible(forcing, budget);
  const double tail = tail_length(d.beta, grid.tail_tol);
  const SourceFn source = perturbation_source(spec, eq, forcing);

  FixedPointResult fp = solve_fixed_point(d, source, tail, grid_for(spec, d, grid), tol, max_iter);

  AlmostPeriodicSolution sol;
  sol.base_equilibrium = eq;
  sol.epsilon = forcing.epsilon;
  sol.picard_iterations = fp.iterations;
  sol.contraction_factor = fp.contraction_factor;
  sol.tail = tail;
  sol.deviation = fp.y.inner_sup(d.norm_weights);
  if (sol.deviation > budget.delta0) {
    std::ostringstream msg;
    msg << "fixed point left the contraction ball (deviation " << sol.deviation
        << " > delta0 " << budget.delta0 << ")";
    throw DivergenceError(msg.str());
  }
  sol.fixed_point_residual =
      inner_distance(apply_greens(d, source, tail, fp.y), fp.y, d.norm_weights);
  sol.orbit = std::move(fp.y);
  sol.orbit.values.colwise() += eq.state;
  sol.ode_residual = ode_residual(spec, eq, forcing, sol);
  return sol;
}

double ode_residual(const SystemSpec& spec, const Equilibrium& eq,
                    const QuasiPeriodicForcing& forcing, const AlmostPeriodicSolution& sol) {
  const OrbitGrid& g = sol.orbit;
  const Eigen::Index lo = std::max<Eigen::Index>(g.inner_lo, 1);
  const Eigen::Index hi = std::min<Eigen::Index>(g.inner_hi, g.size() - 2);
  if (hi - lo + 1 < 1 || g.inner_hi - g.inner_lo + 1 < 3) {
    throw DomainError("ode_residual: need at least three inner grid points");
  }
  Matrix A = -jacobian(spec, eq.state);
  A.diagonal() += spec.linear_eigs();

  const Eigen::Index m = hi - lo + 1;
  Matrix Y = g.values.middleCols(lo, m).colwise() - eq.state;
  Vector times(m);
  for (Eigen::Index j = 0; j < m; ++j) times[j] = g.time(lo + j);
  const Matrix phi = perturbation_source(spec, eq, forcing)(times, Y);
  Matrix R = (g.values.middleCols(lo + 1, m) - g.values.middleCols(lo - 1, m)) / (2.0 * g.dt);
  R += A * Y - phi;
  return R.colwise().norm().maxCoeff();
}

std::vector<SweepRow> epsilon_sweep(const SystemSpec& spec, const Equilibrium& eq,
                                    const Dichotomy& d, const QuasiPeriodicForcing& shape,
                                    const std::vector<double>& eps_list,
                                    const ContractionBudget& budget, const ApGridOptions& grid,
                                    double tol) {
  for (double eps : eps_list) require_admissible(shape.with_epsilon(eps), budget);
  std::vector<SweepRow> rows;
  for (double eps : eps_list) {
    const auto sol = picard_iterate(spec, eq, d, shape.with_epsilon(eps), budget, grid, tol);
    rows.push_back({eps, sol.deviation, budget.delta0, sol.picard_iterations});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Uniqueness and contraction probes

OrbitGrid random_orbit(const OrbitGrid& shape, const Vector& weights, double radius,
                       std::uint64_t seed) {
  const Eigen::Index N = shape.values.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> freq(0.2, 3.0), phase(0.0, 2.0 * std::numbers::pi);

  OrbitGrid y = shape;
  y.values.setZero();
  for (int term = 0; term < 3; ++term) {
    Vector c(N);
    for (Eigen::Index k = 0; k < N; ++k) c[k] = gauss(rng) / static_cast<double>((k + 1) * (k + 1));
    const double nu = freq(rng), theta = phase(rng);
    for (Eigen::Index j = 0; j < y.size(); ++j) {
      y.values.col(j) += std::cos(nu * y.time(j) + theta) * c;
    }
  }
  double sup = 0.0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    sup = std::max(sup, weighted_norm(weights, y.values.col(j)));
  }
  if (sup > 0.0) y.values *= radius / sup;
  return y;
}

UniquenessReport uniqueness_probe(const SystemSpec& spec, const Equilibrium& eq,
                                  const Dichotomy& d, const QuasiPeriodicForcing& forcing,
                                  const ContractionBudget& budget, int n_starts,
                                  std::uint64_t seed, const ApGridOptions& grid, double tol) {
  require_admissible(forcing, budget);
  const double tail = tail_length(d.beta, grid.tail_tol);
  const SourceFn source = perturbation_source(spec, eq, forcing);
  const OrbitGrid zero = grid_for(spec, d, grid);
  const FixedPointResult reference = solve_fixed_point(d, source, tail, zero, tol, 200);

  UniquenessReport report;
  report.tolerance = 10.0 * tol;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < n_starts; ++s) {
    const double radius = budget.delta0 * (s == 0 ? 1.0 : unit(rng));
    const OrbitGrid start = random_orbit(zero, d.norm_weights, radius, rng());
    const FixedPointResult fp = solve_fixed_point(d, source, tail, start, tol, 200);
    report.max_distance =
        std::max(report.max_distance, inner_distance(fp.y, reference.y, d.norm_weights));
    ++report.starts;
  }
  report.unique = report.max_distance <= report.tolerance;
  return report;
}

ContractionProbe probe_contraction(const SystemSpec& spec, const Equilibrium& eq,
                                   const Dichotomy& d, const QuasiPeriodicForcing& forcing,
                                   const ContractionBudget& budget, int n_pairs,
                                   std::uint64_t seed, const ApGridOptions& grid) {
  require_admissible(forcing, budget);
  const double tail = tail_length(d.beta, grid.tail_tol);
  const SourceFn source = perturbation_source(spec, eq, forcing);
  const OrbitGrid zero = grid_for(spec, d, grid);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  ContractionProbe probe;
  for (int p = 0; p < n_pairs; ++p) {
    const double r1 = budget.delta0 * (p == 0 ? 1.0 : unit(rng));
    const double r2 = budget.delta0 * unit(rng);
    const OrbitGrid y1 = random_orbit(zero, d.norm_weights, r1, rng());
    const OrbitGrid y2 = random_orbit(zero, d.norm_weights, r2, rng());
    const OrbitGrid f1 = apply_greens(d, source, tail, y1);
    const OrbitGrid f2 = apply_greens(d, source, tail, y2);
    const double num = inner_distance(f1, f2, d.norm_weights);
    // sup over the whole stored window, which is the sup over the line after clamping.
    double den = 0.0;
    for (Eigen::Index j = 0; j < y1.size(); ++j) {
      den = std::max(den, weighted_norm(d.norm_weights, y1.values.col(j) - y2.values.col(j)));
    }
    if (den > 0.0) probe.max_lipschitz = std::max(probe.max_lipschitz, num / den);
    probe.max_image_radius =
        std::max({probe.max_image_radius, f1.inner_sup(d.norm_weights) / budget.delta0,
                  f2.inner_sup(d.norm_weights) / budget.delta0});
    ++probe.pairs;
  }
  return probe;
}

}  // namespace apdyn
