#include "apdyn/dynamics.hpp"

#include "apdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace apdyn {

namespace {

constexpr double kMaxSubsteps = 1e6;

// phi1(z) = (e^z - 1) / z, stable near 0.
double phi1(double z) {
  if (std::abs(z) < 1e-8) return 1.0 + 0.5 * z;
  return std::expm1(z) / z;
}

class Stepper {
 public:
  Stepper(const SystemSpec& spec, const QuasiPeriodicForcing& forcing)
      : spec_(spec), forcing_(forcing) {}

  // Advances every column of X from t to t + h.
  void step(Matrix& X, double t, double h) {
    const double stiff = pointwise_stiffness(spec_, X).maxCoeff();
    // A runaway substep count means the solution is escaping.
    if (!(h * stiff < kMaxSubsteps)) {
      std::ostringstream msg;
      msg << "integration blew up near t = " << t << " (local stiffness " << stiff << ")";
      throw IntegrationError(msg.str(), t);
    }
    const int m = std::max(1, static_cast<int>(std::ceil(h * stiff)));
    const double k = h / m;
    if (k != cached_k_) prepare(k);
    for (int s = 0; s < m; ++s) {
      const double ts = t + s * k;
      Matrix mid = half_decay_.asDiagonal() * X;
      mid.noalias() += half_phi_.asDiagonal() * rhs(ts, X);
      Matrix next = decay_.asDiagonal() * X;
      next.noalias() += full_phi_.asDiagonal() * rhs(ts + 0.5 * k, mid);
      X = std::move(next);
    }
  }

 private:
  Matrix rhs(double t, const Matrix& X) const {
    Matrix F = nonlinearity_batch(spec_, X);
    if (forcing_.epsilon != 0.0) {
      F.colwise() += forcing_eval(forcing_, t);
    }
    return F;
  }

  void prepare(double k) {
    const Vector& L = spec_.linear_eigs();
    const Eigen::Index n = L.size();
    decay_.resize(n);
    half_decay_.resize(n);
    full_phi_.resize(n);
    half_phi_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      decay_[i] = std::exp(-L[i] * k);
      half_decay_[i] = std::exp(-L[i] * 0.5 * k);
      full_phi_[i] = k * phi1(-L[i] * k);
      half_phi_[i] = 0.5 * k * phi1(-L[i] * 0.5 * k);
    }
    cached_k_ = k;
  }

  const SystemSpec& spec_;
  const QuasiPeriodicForcing& forcing_;
  double cached_k_ = std::numeric_limits<double>::quiet_NaN();
  Vector decay_, half_decay_, full_phi_, half_phi_;
};

void check_finite(const Matrix& X, double t) {
  if (!X.allFinite()) {
    std::ostringstream msg;
    msg << "integration blew up at t = " << t;
    throw IntegrationError(msg.str(), t);
  }
}

struct StepPlan {
  Eigen::Index steps;
  double h;
};

StepPlan plan_steps(double tau, double t_end, double dt) {
  if (!(dt > 0.0)) throw DomainError("integrate: dt must be positive");
  if (!(t_end >= tau)) throw DomainError("integrate: t_end must not precede tau");
  const double span = t_end - tau;
  const auto steps = static_cast<Eigen::Index>(std::ceil(span / dt - 1e-9));
  return {steps, steps > 0 ? span / static_cast<double>(steps) : dt};
}

}  // namespace

Trajectory integrate(const SystemSpec& spec, const QuasiPeriodicForcing& forcing, double tau,
                     const Vector& x0, double t_end, double dt) {
  if (x0.size() != spec.N()) throw DomainError("integrate: initial condition has wrong length");
  validate_forcing(forcing, spec.N());
  const StepPlan plan = plan_steps(tau, t_end, dt);

  Trajectory traj;
  traj.tau = tau;
  traj.dt = plan.h;
  traj.forcing_epsilon = forcing.epsilon;
  traj.states.resize(spec.N(), plan.steps + 1);
  traj.states.col(0) = x0;

  Stepper stepper(spec, forcing);
  Matrix X = x0;
  for (Eigen::Index j = 0; j < plan.steps; ++j) {
    const double t = tau + static_cast<double>(j) * plan.h;
    stepper.step(X, t, plan.h);
    check_finite(X, t + plan.h);
    traj.states.col(j + 1) = X.col(0);
  }
  return traj;
}

BundleResult integrate_bundle(const SystemSpec& spec, const QuasiPeriodicForcing& forcing,
                              double tau, const Matrix& X0, double t_end, double dt,
                              std::optional<double> record_from) {
  if (X0.rows() != spec.N()) throw DomainError("integrate_bundle: states have wrong length");
  validate_forcing(forcing, spec.N());
  const StepPlan plan = plan_steps(tau, t_end, dt);
  const Eigen::Index K = X0.cols();

  Eigen::Index first = plan.steps + 1;
  if (record_from) {
    const double s = (*record_from - tau) / plan.h;
    first = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::ceil(s - 1e-9)), 0,
                                     plan.steps);
  }
  BundleResult result;
  if (record_from) {
    result.tails.resize(K);
    for (auto& tr : result.tails) {
      tr.tau = tau + static_cast<double>(first) * plan.h;
      tr.dt = plan.h;
      tr.forcing_epsilon = forcing.epsilon;
      tr.states.resize(spec.N(), plan.steps - first + 1);
    }
  }
  auto record = [&](Eigen::Index j, const Matrix& X) {
    if (!record_from || j < first) return;
    for (Eigen::Index c = 0; c < K; ++c) result.tails[c].states.col(j - first) = X.col(c);
  };

  Stepper stepper(spec, forcing);
  Matrix X = X0;
  record(0, X);
  for (Eigen::Index j = 0; j < plan.steps; ++j) {
    const double t = tau + static_cast<double>(j) * plan.h;
    stepper.step(X, t, plan.h);
    check_finite(X, t + plan.h);
    record(j + 1, X);
  }
  result.final_states = std::move(X);
  return result;
}

double trailing_distance(const SystemSpec& spec, const Trajectory& traj,
                         const AlmostPeriodicSolution& ap, double trailing_window) {
  if (traj.size() == 0) throw DomainError("trailing_distance: empty trajectory");
  if (trailing_window > traj.t_end() - traj.tau + 1e-9) {
    throw DomainError("trailing_distance: trajectory shorter than the trailing window");
  }
  const double start = traj.t_end() - trailing_window;
  double sup = 0.0;
  for (Eigen::Index j = traj.size() - 1; j >= 0 && traj.time(j) >= start - 1e-9; --j) {
    sup = std::max(sup, alpha_norm(spec, traj.states.col(j) - ap.orbit.at(traj.time(j))));
  }
  return sup;
}

std::optional<int> classify_omega_limit(const SystemSpec& spec, const Trajectory& traj,
                                        const std::vector<AlmostPeriodicSolution>& aps,
                                        double trailing_window, double tol) {
  int best = -1;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < aps.size(); ++i) {
    const double dist = trailing_distance(spec, traj, aps[i], trailing_window);
    if (dist < best_distance) {
      best_distance = dist;
      best = static_cast<int>(i);
    }
  }
  if (best < 0 || !(best_distance < tol)) return std::nullopt;
  return best;
}

BundleClassification classify_bundle(const SystemSpec& spec, const QuasiPeriodicForcing& forcing,
                                     const std::vector<AlmostPeriodicSolution>& aps,
                                     const Matrix& X0, double tau, double horizon,
                                     double max_horizon, double trailing_window, double tol,
                                     double dt) {
  if (!(horizon >= trailing_window)) {
    throw DomainError("classify_bundle: horizon shorter than the trailing window");
  }
  const auto K = static_cast<std::size_t>(X0.cols());
  BundleClassification out;
  out.labels.assign(K, std::nullopt);
  out.distances.assign(K, std::numeric_limits<double>::infinity());
  out.horizons.assign(K, horizon);

  std::vector<Eigen::Index> pending(K);
  for (std::size_t i = 0; i < K; ++i) pending[i] = static_cast<Eigen::Index>(i);
  for (double h = horizon; !pending.empty(); h *= 2.0) {
    Matrix X(X0.rows(), static_cast<Eigen::Index>(pending.size()));
    for (std::size_t i = 0; i < pending.size(); ++i) X.col(static_cast<Eigen::Index>(i)) = X0.col(pending[i]);
    const auto run = integrate_bundle(spec, forcing, tau, X, tau + h, dt, tau + h - trailing_window);
    std::vector<Eigen::Index> still;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const auto c = static_cast<std::size_t>(pending[i]);
      double best = std::numeric_limits<double>::infinity();
      int arg = -1;
      for (std::size_t a = 0; a < aps.size(); ++a) {
        const double dist = trailing_distance(spec, run.tails[i], aps[a], trailing_window);
        if (dist < best) {
          best = dist;
          arg = static_cast<int>(a);
        }
      }
      out.distances[c] = best;
      out.horizons[c] = h;
      if (arg >= 0 && best < tol) {
        out.labels[c] = arg;
      } else {
        still.push_back(pending[i]);
      }
    }
    pending = std::move(still);
    if (2.0 * h > max_horizon + 1e-9) break;
  }
  return out;
}

std::vector<Vector> unstable_manifold_sample(const SystemSpec& spec,
                                             const QuasiPeriodicForcing& forcing,
                                             const AlmostPeriodicSolution& ap, const Dichotomy& d,
                                             double t_section, int n_samples, double seed_radius,
                                             double horizon, double dt, std::uint64_t seed) {
  if (d.dimension() != spec.N()) throw DomainError("unstable_manifold_sample: dimension mismatch");
  if (!d.symmetric) throw DomainError("unstable_manifold_sample: requires a symmetric linearization");
  const int morse = d.rank;
  if (morse == 0) return {ap.orbit.at(t_section)};
  if (!(seed_radius > 0.0)) throw DomainError("unstable_manifold_sample: seed_radius must be positive");
  if (!(horizon >= 0.0)) throw DomainError("unstable_manifold_sample: horizon must be nonnegative");

  // Symmetric eigenvalues ascend, so the unstable directions come first.
  const Matrix U = d.eigenvectors.leftCols(morse);
  std::vector<Vector> dirs;
  if (morse == 1) {
    dirs = {U.col(0), -U.col(0)};
  } else if (morse == 2) {
    const int n = std::max(n_samples, 1);
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * std::numbers::pi * j / n;
      dirs.push_back(std::cos(th) * U.col(0) + std::sin(th) * U.col(1));
    }
  } else {
    for (int i = 0; i < morse; ++i) {
      dirs.push_back(U.col(i));
      dirs.push_back(-U.col(i));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    while (static_cast<int>(dirs.size()) < n_samples) {
      Vector c(morse);
      for (int i = 0; i < morse; ++i) c[i] = gauss(rng);
      dirs.push_back(U * (c / c.norm()));
    }
  }

  const double tau = t_section - horizon;
  const Vector base = ap.orbit.at(tau);
  Matrix X0(spec.N(), static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    X0.col(static_cast<Eigen::Index>(i)) = base + seed_radius * dirs[i];
  }
  const Matrix X = integrate_bundle(spec, forcing, tau, X0, t_section, dt).final_states;
  std::vector<Vector> out;
  for (Eigen::Index c = 0; c < X.cols(); ++c) out.push_back(X.col(c));
  return out;
}

ManifoldSample unstable_manifold_union(const SystemSpec& spec, const QuasiPeriodicForcing& forcing,
                                       const AlmostPeriodicSolution& ap, const Dichotomy& d,
                                       double t_section, int n_samples,
                                       const std::vector<double>& radii, double horizon,
                                       double dt) {
  ManifoldSample sample;
  sample.morse_index = d.rank;
  sample.points.push_back(ap.orbit.at(t_section));
  if (d.rank == 0) return sample;
  for (double r : radii) {
    auto pts = unstable_manifold_sample(spec, forcing, ap, d, t_section, n_samples, r, horizon, dt);
    sample.points.insert(sample.points.end(), pts.begin(), pts.end());
  }
  return sample;
}

Matrix sample_alpha_ball(const SystemSpec& spec, double radius, int count, std::uint64_t seed) {
  if (!(radius > 0.0) || count < 0) throw DomainError("sample_alpha_ball: bad radius or count");
  const int N = spec.N();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix X(N, count);
  for (int c = 0; c < count; ++c) {
    Vector z(N);
    for (int k = 0; k < N; ++k) z[k] = gauss(rng);
    const double r = radius * std::pow(unit(rng), 1.0 / N);
    X.col(c) = (r / z.norm()) * z.cwiseQuotient(spec.alpha_weights());
  }
  return X;
}

Matrix init_box_points(const InitBox& box, int N) {
  if (box.modes.empty() || box.points_per_axis < 1) {
    throw DomainError("init_box_points: box needs at least one mode and one point");
  }
  for (int m : box.modes) {
    if (m < 1 || m > N) throw DomainError("init_box_points: mode outside 1..N");
  }
  if (!(box.hi >= box.lo)) throw DomainError("init_box_points: empty box");
  const int p = box.points_per_axis;
  const auto dims = box.modes.size();
  Eigen::Index total = 1;
  for (std::size_t i = 0; i < dims; ++i) total *= p;
  Matrix X = Matrix::Zero(N, total);
  for (Eigen::Index c = 0; c < total; ++c) {
    Eigen::Index rem = c;
    for (std::size_t i = 0; i < dims; ++i) {
      const auto idx = rem % p;
      rem /= p;
      const double v = p == 1 ? 0.5 * (box.lo + box.hi)
                              : box.lo + (box.hi - box.lo) * static_cast<double>(idx) / (p - 1);
      X(box.modes[i] - 1, c) = v;
    }
  }
  return X;
}

double one_sided_hausdorff(const Matrix& from, const Matrix& to, const Vector& weights) {
  if (from.cols() == 0) return 0.0;
  if (to.cols() == 0) return std::numeric_limits<double>::infinity();
  if (from.rows() != to.rows()) throw DomainError("one_sided_hausdorff: dimension mismatch");
  const Matrix a = weights.size() ? Matrix(weights.asDiagonal() * from) : from;
  const Matrix b = weights.size() ? Matrix(weights.asDiagonal() * to) : to;
  const Eigen::RowVectorXd bn = b.colwise().squaredNorm();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const Eigen::RowVectorXd d2 =
        (bn.array() - 2.0 * (a.col(i).transpose() * b).array() + a.col(i).squaredNorm())
            .matrix();
    // Recompute the nearest candidate exactly to avoid cancellation.
    Eigen::Index j;
    d2.minCoeff(&j);
    worst = std::max(worst, (a.col(i) - b.col(j)).norm());
  }
  return worst;
}

AttractorCloud pullback_attractor_sample(const SystemSpec& spec,
                                         const QuasiPeriodicForcing& forcing, double t,
                                         const InitBox& box, const std::vector<double>& depths,
                                         double dt, double cloud_tol) {
  if (depths.empty()) throw DomainError("pullback_attractor_sample: no depths given");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (!(depths[i] >= 0.0) || (i > 0 && !(depths[i] > depths[i - 1]))) {
      throw DomainError("pullback_attractor_sample: depths must be nonnegative and increasing");
    }
  }
  const Matrix X0 = init_box_points(box, spec.N());
  const Vector& w = spec.alpha_weights();

  AttractorCloud cloud;
  cloud.t = t;
  cloud.cloud_tol = cloud_tol;
  Matrix previous;
  for (double depth : depths) {
    Matrix current = integrate_bundle(spec, forcing, t - depth, X0, t, dt).final_states;
    cloud.depths.push_back(depth);
    if (previous.size() != 0) {
      const double dist = one_sided_hausdorff(current, previous, w);
      cloud.distances.push_back(dist);
      if (dist < cloud_tol) {
        cloud.points = std::move(current);
        cloud.pullback_depth = depth;
        return cloud;
      }
    }
    previous = std::move(current);
  }
  const double last = cloud.distances.empty() ? std::numeric_limits<double>::infinity()
                                              : cloud.distances.back();
  const double before = cloud.distances.size() < 2
                            ? std::numeric_limits<double>::infinity()
                            : cloud.distances[cloud.distances.size() - 2];
  std::ostringstream msg;
  msg << "pullback sampling did not converge by depth " << depths.back()
      << " (last distances " << before << ", " << last << "; tolerance " << cloud_tol << ")";
  throw ConvergenceError(msg.str(), before, last);
}

StructureReport structure_check(const SystemSpec& spec, const AttractorCloud& cloud,
                                const std::vector<ManifoldSample>& manifolds, double tol) {
  Eigen::Index total = 0;
  StructureReport report;
  report.tolerance = tol;
  for (const auto& m : manifolds) {
    total += static_cast<Eigen::Index>(m.points.size());
    report.dimension_proxy = std::max(report.dimension_proxy, m.morse_index);
  }
  Matrix target(spec.N(), total);
  Eigen::Index c = 0;
  for (const auto& m : manifolds) {
    for (const auto& p : m.points) {
      if (p.size() != spec.N()) throw DomainError("structure_check: sample has wrong length");
      target.col(c++) = p;
    }
  }
  report.distance = one_sided_hausdorff(cloud.points, target, spec.alpha_weights());
  report.within_tolerance = report.distance < tol;
  return report;
}

}  // namespace apdyn
