#pragma once

#include "apdyn/ap_solver.hpp"
#include "apdyn/dichotomy.hpp"
#include "apdyn/system.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace apdyn {

/// States x(tau + j dt) of one solution of
///   dx/dt + A0 x = f(x) + g_eps(t).
struct Trajectory {
  double tau = 0.0;
  double dt = 0.0;
  Matrix states;  // N x (steps + 1), column 0 is the initial condition
  double forcing_epsilon = 0.0;

  Eigen::Index size() const { return states.cols(); }
  double time(Eigen::Index j) const { return tau + static_cast<double>(j) * dt; }
  double t_end() const { return time(size() - 1); }
};

/// Second-order exponential integrator (midpoint rule for f + g_eps on top of
/// the exact diagonal linear flow). Each step of size dt is split into
/// ceil(dt * stiffness) substeps when the pointwise stiffness of the cubic
/// term would make the explicit part unstable; only the full steps are stored.
/// The step is shrunk slightly if needed so that (t_end - tau) / dt is whole.
Trajectory integrate(const SystemSpec& spec, const QuasiPeriodicForcing& forcing, double tau,
                     const Vector& x0, double t_end, double dt);

struct BundleResult {
  Matrix final_states;             // N x K
  std::vector<Trajectory> tails;   // per column, the part with t >= record_from
};

/// Integrates the columns of X0 together. Set record_from to keep the
/// trailing part of every trajectory.
BundleResult integrate_bundle(const SystemSpec& spec, const QuasiPeriodicForcing& forcing,
                              double tau, const Matrix& X0, double t_end, double dt,
                              std::optional<double> record_from = std::nullopt);

/// Index of the AP solution that the trajectory tracks over its trailing
/// window, if the sup alpha-distance is below tol.
std::optional<int> classify_omega_limit(const SystemSpec& spec, const Trajectory& traj,
                                        const std::vector<AlmostPeriodicSolution>& aps,
                                        double trailing_window, double tol);

/// Distance sup_{t in trailing window} ||traj(t) - ap(t)||_alpha.
double trailing_distance(const SystemSpec& spec, const Trajectory& traj,
                         const AlmostPeriodicSolution& ap, double trailing_window);

struct BundleClassification {
  std::vector<std::optional<int>> labels;  // per initial condition
  std::vector<double> distances;           // trailing distance to the chosen orbit
  std::vector<double> horizons;            // horizon at which each was decided
};

/// Classifies every column of X0 started at tau. Unresolved initial
/// conditions are rerun with the horizon doubled until max_horizon.
BundleClassification classify_bundle(const SystemSpec& spec, const QuasiPeriodicForcing& forcing,
                                     const std::vector<AlmostPeriodicSolution>& aps,
                                     const Matrix& X0, double tau, double horizon,
                                     double max_horizon, double trailing_window, double tol,
                                     double dt = 1e-2);

/// Endpoints at t_section of solutions started at ap(t_section - horizon) +
/// seed_radius * v with v a unit vector in the range of P. Morse index 0 gives
/// the singleton {ap(t_section)}. For Morse index 1 the directions are +-v,
/// for 2 they are cos(2 pi j/n) v1 + sin(2 pi j/n) v2, and for higher indices
/// +-v_i followed by seeded random unit combinations up to n_samples.
std::vector<Vector> unstable_manifold_sample(const SystemSpec& spec,
                                             const QuasiPeriodicForcing& forcing,
                                             const AlmostPeriodicSolution& ap, const Dichotomy& d,
                                             double t_section, int n_samples, double seed_radius,
                                             double horizon, double dt = 1e-2,
                                             std::uint64_t seed = 1);

/// Union of samples over a ladder of seed radii together with ap(t_section).
/// Successive radii fill in the manifold between the seed sphere and its
/// image after `horizon`.
struct ManifoldSample {
  int morse_index = 0;
  std::vector<Vector> points;
};

ManifoldSample unstable_manifold_union(const SystemSpec& spec, const QuasiPeriodicForcing& forcing,
                                       const AlmostPeriodicSolution& ap, const Dichotomy& d,
                                       double t_section, int n_samples,
                                       const std::vector<double>& radii, double horizon,
                                       double dt = 1e-2);

/// `count` points uniformly distributed in the alpha-ball of the given
/// radius (seeded).
Matrix sample_alpha_ball(const SystemSpec& spec, double radius, int count, std::uint64_t seed);

/// Tensor grid over selected modes (1-based); all other coefficients are 0.
struct InitBox {
  std::vector<int> modes = {1, 2};
  double lo = -3.0;
  double hi = 3.0;
  int points_per_axis = 15;
};

Matrix init_box_points(const InitBox& box, int N);

struct AttractorCloud {
  double t = 0.0;
  Matrix points;                   // N x K
  double pullback_depth = 0.0;
  double cloud_tol = 0.0;
  std::vector<double> depths;      // depths actually integrated
  std::vector<double> distances;   // one-sided distance of cloud k+1 to cloud k
};

/// Pullback sample of the attractor section at time t. Clouds for
/// successive depths are compared by the one-sided Hausdorff distance from
/// the new cloud to the previous one; sampling stops once it drops below
/// cloud_tol. Throws ConvergenceError when the deepest depth is reached first.
AttractorCloud pullback_attractor_sample(const SystemSpec& spec,
                                         const QuasiPeriodicForcing& forcing, double t,
                                         const InitBox& box, const std::vector<double>& depths,
                                         double dt = 1e-2, double cloud_tol = 1e-2);

/// max_{a in from} min_{b in to} ||a - b||_w over the columns.
double one_sided_hausdorff(const Matrix& from, const Matrix& to, const Vector& weights);

struct StructureReport {
  double distance = 0.0;       // one-sided Hausdorff, cloud -> union of samples
  int dimension_proxy = 0;     // largest Morse index among the samples
  double tolerance = 0.0;
  bool within_tolerance = false;
};

StructureReport structure_check(const SystemSpec& spec, const AttractorCloud& cloud,
                                const std::vector<ManifoldSample>& manifolds, double tol);

}  // namespace apdyn
