#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace apdyn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace detail {
struct Collocation;
}

/// Galerkin truncation of
///
///     du/dt - u_xx = lambda (u - c u^3),   x in (0, pi),  u(0) = u(pi) = 0
///
/// onto the first N Dirichlet eigenfunctions. Coefficient vectors are
/// coordinates in the orthonormal L2 basis e_k(x) = sqrt(2/pi) sin(kx), so the
/// linear part is diagonal with entries linear_eigs[k-1] and the X^alpha norm
/// is the Euclidean norm weighted by (linear_eigs + shift_a)^alpha.
///
/// The cubic term is evaluated pseudo-spectrally on 3N+1 interior collocation
/// points, which projects u^3 onto the first N modes without aliasing.
class SystemSpec {
 public:
  SystemSpec(Vector linear_eigs, double lambda, double alpha, double shift_a = 0.0,
             double cubic = 1.0);

  int N() const { return static_cast<int>(linear_eigs_.size()); }
  double lambda() const { return lambda_; }
  double alpha() const { return alpha_; }
  double shift_a() const { return shift_a_; }
  /// Coefficient c of the cubic term; 0 turns the model into a linear system.
  double cubic() const { return cubic_; }
  const Vector& linear_eigs() const { return linear_eigs_; }
  /// Diagonal of A1^alpha, the weights of the X^alpha norm.
  const Vector& alpha_weights() const { return alpha_weights_; }

  /// Same model at a different bifurcation parameter (shares the grid).
  SystemSpec with_lambda(double lambda) const;

  int grid_size() const;
  /// M x N matrix mapping coefficients to values on the collocation grid.
  const Matrix& synthesis() const;
  /// N x M matrix mapping grid values to Galerkin coefficients.
  const Matrix& analysis() const;
  /// Quadrature weight of a single grid point (pi / (M + 1)).
  double quadrature_weight() const;

 private:
  Vector linear_eigs_;
  double lambda_;
  double alpha_;
  double shift_a_;
  double cubic_;
  Vector alpha_weights_;
  std::shared_ptr<const detail::Collocation> grid_;
};

/// Chafee-Infante instance: linear_eigs = (1, 4, ..., N^2), alpha = 1/2.
SystemSpec assemble_chafee_infante(int N, double lambda);

/// Galerkin projection of lambda (u - c u^3).
Vector nonlinearity(const SystemSpec& spec, const Vector& u);
/// Column-wise nonlinearity for a batch of states (N x K).
Matrix nonlinearity_batch(const SystemSpec& spec, const Matrix& U);

/// Galerkin matrix of v -> lambda (1 - 3 c u^2) v.
Matrix jacobian(const SystemSpec& spec, const Vector& u);

/// Largest pointwise |lambda (1 - 3 c u^2)| over the grid, for each column.
/// Used as a stiffness estimate of the nonlinear term.
Eigen::RowVectorXd pointwise_stiffness(const SystemSpec& spec, const Matrix& U);

double alpha_norm(const SystemSpec& spec, const Vector& x);
/// ||x||_alpha with explicit weights (empty weights mean the Euclidean norm).
double weighted_norm(const Vector& weights, const Eigen::Ref<const Vector>& x);

/// epsilon * (sum_j a_j cos(omega_j t + phi_j)) * profile.
struct QuasiPeriodicForcing {
  double epsilon = 0.0;
  std::vector<double> frequencies;
  std::vector<double> phases;
  std::vector<double> amplitudes;
  Vector profile;

  /// Scalar almost periodic factor g(t), without epsilon.
  double signal(double t) const;
  /// sup_t ||g_eps(t)||, i.e. epsilon * sum|a_j| * ||profile||.
  double uniform_bound() const;
  QuasiPeriodicForcing with_epsilon(double eps) const;
};

/// Checks lengths and signs; throws DomainError.
void validate_forcing(const QuasiPeriodicForcing& forcing, int N);

Vector forcing_eval(const QuasiPeriodicForcing& forcing, double t);

/// Standard two-frequency forcing (1, sqrt 2) with unit amplitudes and zero
/// phases acting along `profile`.
QuasiPeriodicForcing incommensurate_forcing(double epsilon, Vector profile);

}  // namespace apdyn
