#pragma once

#include "apdyn/system.hpp"

#include <string>
#include <variant>
#include <vector>

namespace apdyn {

/// Stationary state x* of dx/dt + A0 x = f(x) together with the spectrum of
/// its linearization A = A0 - f'(x*). A is symmetric here, so the spectrum is
/// real and sorted ascending.
struct Equilibrium {
  Vector state;
  Vector spectrum;
  int morse_index = 0;    // number of negative eigenvalues of A
  double gap = 0.0;       // min |eigenvalue|
  double newton_residual = 0.0;

  bool hyperbolic(double threshold = 0.0) const { return gap > threshold; }
};

enum class NewtonFailureKind { NotConverged, Singular };

struct NewtonFailure {
  NewtonFailureKind kind = NewtonFailureKind::NotConverged;
  int iterations = 0;
  double residual = 0.0;

  std::string describe() const;
};

using NewtonResult = std::variant<Equilibrium, NewtonFailure>;

/// A0 x - f(x).
Vector equilibrium_residual(const SystemSpec& spec, const Vector& x);

/// Newton's method on A0 x - f(x) = 0. Failures are returned, not thrown.
NewtonResult newton_solve(const SystemSpec& spec, const Vector& x0, double tol = 1e-12,
                          int max_iter = 50);

/// Spectrum, Morse index and gap at a given state.
Equilibrium characterize(const SystemSpec& spec, const Vector& state, double residual);

struct EquilibriumSearchOptions {
  double newton_tol = 1e-12;
  int max_iter = 50;
  double dedup_radius = 1e-6;      // alpha-norm
  double continuation_step = 0.1;  // in lambda
  std::vector<double> amplitude_grid = {0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0};
};

/// Multistart search: the origin, +-c e_k sweeps for k <= ceil(sqrt(lambda)),
/// and natural continuation in lambda along each branch bifurcating at k^2.
/// Results are deduplicated in the alpha-norm and sorted by decreasing Morse
/// index, then by state.
std::vector<Equilibrium> find_equilibria(const SystemSpec& spec,
                                         const EquilibriumSearchOptions& options = {});

/// V(u) = int_0^pi (u_x^2 - lambda u^2 + (lambda c / 2) u^4) dx.
double liapunov_value(const SystemSpec& spec, const Vector& u);
/// Gradient of V in coefficient space, equal to 2 (A0 u - f(u)).
Vector liapunov_gradient(const SystemSpec& spec, const Vector& u);

struct HyperbolicityReport {
  std::vector<double> gaps;
  double min_gap = 0.0;
  double threshold = 0.0;
  std::vector<int> flagged;  // indices with gap below threshold

  bool all_hyperbolic() const { return flagged.empty(); }
};

HyperbolicityReport hyperbolicity_report(const std::vector<Equilibrium>& eqs,
                                         double threshold = 1e-2);

/// Expected equilibrium count 2 floor(sqrt(lambda)) + 1 for linear_eigs = k^2.
int chafee_infante_count(double lambda);

}  // namespace apdyn
