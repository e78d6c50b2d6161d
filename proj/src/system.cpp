#include "apdyn/system.hpp"

#include "apdyn/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace apdyn {

namespace detail {

struct Collocation {
  int M = 0;
  double weight = 0.0;
  Matrix synthesis;  // M x N
  Matrix analysis;   // N x M

  explicit Collocation(int N) {
    M = 3 * N + 1;
    const double h = std::numbers::pi / (M + 1);
    weight = h;
    const double norm = std::sqrt(2.0 / std::numbers::pi);
    synthesis.resize(M, N);
    for (int j = 0; j < M; ++j) {
      const double x = (j + 1) * h;
      for (int k = 0; k < N; ++k) synthesis(j, k) = norm * std::sin((k + 1) * x);
    }
    analysis = weight * synthesis.transpose();
  }
};

}  // namespace detail

namespace {

void require_length(const SystemSpec& spec, Eigen::Index n, const char* what) {
  if (n != spec.N()) {
    throw DomainError(std::string(what) + ": expected length " + std::to_string(spec.N()) +
                      ", got " + std::to_string(n));
  }
}

}  // namespace

SystemSpec::SystemSpec(Vector linear_eigs, double lambda, double alpha, double shift_a,
                       double cubic)
    : linear_eigs_(std::move(linear_eigs)),
      lambda_(lambda),
      alpha_(alpha),
      shift_a_(shift_a),
      cubic_(cubic) {
  if (linear_eigs_.size() == 0) throw DomainError("SystemSpec: empty Galerkin basis");
  if (!(alpha_ >= 0.0 && alpha_ < 1.0)) throw DomainError("SystemSpec: alpha must lie in [0, 1)");
  for (Eigen::Index k = 0; k < linear_eigs_.size(); ++k) {
    if (!(linear_eigs_[k] + shift_a_ > 0.0)) {
      throw DomainError("SystemSpec: A0 + aI must be positive");
    }
    if (k > 0 && !(linear_eigs_[k] > linear_eigs_[k - 1])) {
      throw DomainError("SystemSpec: linear eigenvalues must be strictly increasing");
    }
  }
  alpha_weights_ = (linear_eigs_.array() + shift_a_).pow(alpha_).matrix();
  grid_ = std::make_shared<const detail::Collocation>(N());
}

SystemSpec SystemSpec::with_lambda(double lambda) const {
  SystemSpec copy = *this;
  copy.lambda_ = lambda;
  return copy;
}

int SystemSpec::grid_size() const { return grid_->M; }
const Matrix& SystemSpec::synthesis() const { return grid_->synthesis; }
const Matrix& SystemSpec::analysis() const { return grid_->analysis; }
double SystemSpec::quadrature_weight() const { return grid_->weight; }

SystemSpec assemble_chafee_infante(int N, double lambda) {
  if (N < 1) throw DomainError("assemble_chafee_infante: N must be at least 1");
  if (!(lambda > 0.0)) throw DomainError("assemble_chafee_infante: lambda must be positive");
  Vector eigs(N);
  for (int k = 0; k < N; ++k) eigs[k] = static_cast<double>((k + 1) * (k + 1));
  return SystemSpec(std::move(eigs), lambda, 0.5, 0.0, 1.0);
}

Matrix nonlinearity_batch(const SystemSpec& spec, const Matrix& U) {
  require_length(spec, U.rows(), "nonlinearity");
  Matrix grid = spec.synthesis() * U;
  const double lam = spec.lambda();
  const double c = spec.cubic();
  grid = (lam * (grid.array() - c * grid.array().cube())).matrix();
  return spec.analysis() * grid;
}

Vector nonlinearity(const SystemSpec& spec, const Vector& u) {
  require_length(spec, u.size(), "nonlinearity");
  return nonlinearity_batch(spec, u);
}

Matrix jacobian(const SystemSpec& spec, const Vector& u) {
  require_length(spec, u.size(), "jacobian");
  const Vector grid = spec.synthesis() * u;
  const Vector diag =
      (spec.lambda() * (1.0 - 3.0 * spec.cubic() * grid.array().square())).matrix();
  return spec.analysis() * diag.asDiagonal() * spec.synthesis();
}

Eigen::RowVectorXd pointwise_stiffness(const SystemSpec& spec, const Matrix& U) {
  require_length(spec, U.rows(), "pointwise_stiffness");
  const Matrix grid = spec.synthesis() * U;
  const Eigen::ArrayXXd local =
      (spec.lambda() * (1.0 - 3.0 * spec.cubic() * grid.array().square())).abs();
  return local.colwise().maxCoeff().matrix();
}

double weighted_norm(const Vector& weights, const Eigen::Ref<const Vector>& x) {
  if (weights.size() == 0) return x.norm();
  return weights.cwiseProduct(x).norm();
}

double alpha_norm(const SystemSpec& spec, const Vector& x) {
  require_length(spec, x.size(), "alpha_norm");
  return weighted_norm(spec.alpha_weights(), x);
}

double QuasiPeriodicForcing::signal(double t) const {
  double s = 0.0;
  for (std::size_t j = 0; j < frequencies.size(); ++j) {
    s += amplitudes[j] * std::cos(frequencies[j] * t + phases[j]);
  }
  return s;
}

double QuasiPeriodicForcing::uniform_bound() const {
  double a = 0.0;
  for (double v : amplitudes) a += std::abs(v);
  return epsilon * a * profile.norm();
}

QuasiPeriodicForcing QuasiPeriodicForcing::with_epsilon(double eps) const {
  QuasiPeriodicForcing copy = *this;
  copy.epsilon = eps;
  return copy;
}

void validate_forcing(const QuasiPeriodicForcing& forcing, int N) {
  if (!(forcing.epsilon >= 0.0)) throw DomainError("forcing: epsilon must be nonnegative");
  const auto n = forcing.frequencies.size();
  if (forcing.phases.size() != n || forcing.amplitudes.size() != n) {
    throw DomainError("forcing: frequencies, phases and amplitudes must have equal length");
  }
  for (double w : forcing.frequencies) {
    if (!(w > 0.0)) throw DomainError("forcing: frequencies must be positive");
  }
  if (forcing.profile.size() != N) {
    throw DomainError("forcing: profile must have " + std::to_string(N) + " coefficients");
  }
}

Vector forcing_eval(const QuasiPeriodicForcing& forcing, double t) {
  if (forcing.epsilon == 0.0) return Vector::Zero(forcing.profile.size());
  return (forcing.epsilon * forcing.signal(t)) * forcing.profile;
}

QuasiPeriodicForcing incommensurate_forcing(double epsilon, Vector profile) {
  QuasiPeriodicForcing f;
  f.epsilon = epsilon;
  f.frequencies = {1.0, std::numbers::sqrt2};
  f.phases = {0.0, 0.0};
  f.amplitudes = {1.0, 1.0};
  f.profile = std::move(profile);
  return f;
}

}  // namespace apdyn
