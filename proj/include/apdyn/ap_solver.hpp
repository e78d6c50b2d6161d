#pragma once

#include "apdyn/dichotomy.hpp"
#include "apdyn/equilibria.hpp"
#include "apdyn/system.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace apdyn {

/// Uniformly sampled orbit y(t0 + j dt), j = 0..J, stored column-wise.
/// Columns inner_lo..inner_hi (inclusive) form the trusted window; the
/// buffers on either side absorb the truncation of the infinite integrals.
struct OrbitGrid {
  double t0 = 0.0;
  double dt = 0.0;
  Matrix values;
  Eigen::Index inner_lo = 0;
  Eigen::Index inner_hi = 0;

  Eigen::Index size() const { return values.cols(); }
  double time(Eigen::Index j) const { return t0 + static_cast<double>(j) * dt; }
  double inner_start() const { return time(inner_lo); }
  double inner_end() const { return time(inner_hi); }
  /// Linear interpolation; throws DomainError outside the stored window.
  Vector at(double t) const;
  /// sup over the inner window of the weighted norm.
  double inner_sup(const Vector& weights) const;
};

/// Grid covering [inner_start - tail, inner_end + tail] with the inner
/// window aligned to inner_start.
OrbitGrid make_orbit_grid(int N, double inner_start, double inner_end, double dt, double tail);

/// sup over the inner window of ||a - b||_w. The inner windows must coincide;
/// the tails may differ.
double inner_distance(const OrbitGrid& a, const OrbitGrid& b, const Vector& weights);

/// Batched right-hand side phi(t, y): column j of the result belongs to
/// times[j] and states.col(j).
using SourceFn = std::function<Matrix(const Vector& times, const Matrix& states)>;

/// L = ln(1 / tail_tol) / beta.
double tail_length(double beta, double tail_tol);

/// Green's operator of a hyperbolic linear part,
///
///   F(y)(t) = int_{-inf}^t e^{-A(t-s)} (I-P) phi(s, y(s)) ds
///           - int_t^{inf}  e^{-A(t-s)} P     phi(s, y(s)) ds,
///
/// evaluated in the eigenbasis of A. Between grid nodes phi is linear and the
/// kernel is integrated exactly, so each eigencomponent obeys a two-term
/// recursion (forward for stable modes, backward for unstable ones). Outside
/// the stored window y is clamped to its edge values and the recursions start
/// `tail` time units beyond each edge.
OrbitGrid apply_greens(const Dichotomy& d, const SourceFn& source, double tail,
                       const OrbitGrid& y);

/// h(y) = f(y + x*) - f(x*) - f'(x*) y.
Vector remainder_h(const SystemSpec& spec, const Equilibrium& eq, const Vector& y);
/// Column-wise remainder, evaluated pointwise on the grid as
/// -lambda c (3 u* v^2 + v^3) to avoid cancellation.
Matrix remainder_batch(const SystemSpec& spec, const Equilibrium& eq, const Matrix& Y);

/// phi_eps(t, y) = h(y) + g_eps(t).
SourceFn perturbation_source(const SystemSpec& spec, const Equilibrium& eq,
                             const QuasiPeriodicForcing& forcing);

/// Thresholds that make F a 1/2-contraction of the delta0-ball.
struct ContractionBudget {
  double delta1 = 0.0;
  double delta0 = 0.0;
  double eps_threshold = 0.0;
  double beta = 0.0;
  double M1 = 0.0;
  double alpha = 0.0;
  double gamma_factor = 0.0;  // Gamma(1 - alpha)
  double h_bound = 0.0;       // min of the three remainder thresholds
  double forcing_ball_bound = 0.0;    // min(beta, beta^(1-a)/Gamma) * delta0 / (8 M1)
  double sampled_h_sup = 0.0;         // sampled sup ||h'|| on the delta1-ball
};

struct BudgetOptions {
  int random_directions = 64;
  int refine_steps = 40;
  int bisection_steps = 24;
  std::uint64_t seed = 7;
};

/// ||h'(x)||_{L(X^alpha, X)} = ||(f'(x* + x) - f'(x*)) A1^{-alpha}||_2.
double remainder_derivative_norm(const SystemSpec& spec, const Equilibrium& eq, const Vector& x);

/// Sampled sup of remainder_derivative_norm over the alpha-sphere of the
/// given radius: coordinate directions, random directions, then a local
/// ascent from the best candidates.
double sampled_remainder_sup(const SystemSpec& spec, const Equilibrium& eq, double radius,
                             const BudgetOptions& options = {});

ContractionBudget contraction_budget(const SystemSpec& spec, const Equilibrium& eq,
                                     const Dichotomy& d, const QuasiPeriodicForcing& family,
                                     const BudgetOptions& options = {});

/// F applied to a deviation orbit y for the perturbed problem at eq.
OrbitGrid greens_operator(const SystemSpec& spec, const Equilibrium& eq, const Dichotomy& d,
                          const QuasiPeriodicForcing& forcing, const OrbitGrid& y,
                          double tail_tol = 1e-10);

struct FixedPointResult {
  OrbitGrid y;
  int iterations = 0;
  double last_step = 0.0;
  double contraction_factor = 0.0;
  std::vector<double> steps;
};

/// Picard iteration y <- F(y) until the sup-norm step on the inner window
/// drops below tol. Throws DivergenceError when a step ratio reaches 1 or
/// max_iter is exhausted.
FixedPointResult solve_fixed_point(const Dichotomy& d, const SourceFn& source, double tail,
                                   OrbitGrid y, double tol, int max_iter);

struct ApGridOptions {
  double inner_start = -250.0;
  double inner_end = 250.0;
  double dt = 1e-2;
  double tail_tol = 1e-10;
};

struct AlmostPeriodicSolution {
  OrbitGrid orbit;               // x* + y*
  Equilibrium base_equilibrium;
  double epsilon = 0.0;
  int picard_iterations = 0;
  double fixed_point_residual = 0.0;
  double ode_residual = 0.0;
  double contraction_factor = 0.0;
  double deviation = 0.0;        // sup_t ||orbit - x*||_alpha on the inner window
  double tail = 0.0;

  /// y* = orbit - x*.
  OrbitGrid deviation_orbit() const;
};

AlmostPeriodicSolution picard_iterate(const SystemSpec& spec, const Equilibrium& eq,
                                      const Dichotomy& d, const QuasiPeriodicForcing& forcing,
                                      const ContractionBudget& budget,
                                      const ApGridOptions& grid = {}, double tol = 1e-12,
                                      int max_iter = 100);

/// sup over the inner window of ||dy/dt + A y - phi_eps(t, y)|| with central
/// differences.
double ode_residual(const SystemSpec& spec, const Equilibrium& eq,
                    const QuasiPeriodicForcing& forcing, const AlmostPeriodicSolution& sol);

struct SweepRow {
  double epsilon = 0.0;
  double deviation = 0.0;
  double delta0 = 0.0;
  int iterations = 0;
};

std::vector<SweepRow> epsilon_sweep(const SystemSpec& spec, const Equilibrium& eq,
                                    const Dichotomy& d, const QuasiPeriodicForcing& shape,
                                    const std::vector<double>& eps_list,
                                    const ContractionBudget& budget,
                                    const ApGridOptions& grid = {}, double tol = 1e-12);

/// Smooth random orbit on the grid with sup ||y||_alpha equal to radius.
OrbitGrid random_orbit(const OrbitGrid& shape, const Vector& weights, double radius,
                       std::uint64_t seed);

struct UniquenessReport {
  bool unique = false;
  int starts = 0;
  double max_distance = 0.0;
  double tolerance = 0.0;
};

/// Picard from n_starts random orbits in the delta0-ball (the first on its
/// boundary); unique iff all land within 10 tol of the fixed point from 0.
UniquenessReport uniqueness_probe(const SystemSpec& spec, const Equilibrium& eq,
                                  const Dichotomy& d, const QuasiPeriodicForcing& forcing,
                                  const ContractionBudget& budget, int n_starts,
                                  std::uint64_t seed, const ApGridOptions& grid = {},
                                  double tol = 1e-12);

struct ContractionProbe {
  double max_lipschitz = 0.0;     // sup ||F y1 - F y2|| / sup ||y1 - y2||
  double max_image_radius = 0.0;  // sup ||F y|| over sampled y, relative to delta0
  int pairs = 0;
};

/// Random orbit pairs in the delta0-ball.
ContractionProbe probe_contraction(const SystemSpec& spec, const Equilibrium& eq,
                                   const Dichotomy& d, const QuasiPeriodicForcing& forcing,
                                   const ContractionBudget& budget, int n_pairs,
                                   std::uint64_t seed, const ApGridOptions& grid = {});

}  // namespace apdyn
