#include "apdyn/dichotomy.hpp"

#include "apdyn/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace apdyn {

namespace {

constexpr double kHyperbolicTol = 1e-10;

double operator_norm(const Matrix& B) {
  if (B.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(B);
  return svd.singularValues()(0);
}

double directional_norm(const Matrix& B, const std::vector<Vector>& directions) {
  double best = 0.0;
  for (const auto& x : directions) {
    const double nx = x.norm();
    if (nx > 0.0) best = std::max(best, (B * x).norm() / nx);
  }
  return best;
}

// Propagator e^{-A dt} restricted to eigenvalues selected by `keep`.
template <typename Keep>
Matrix restricted_exponential(const Dichotomy& d, double dt, Keep keep) {
  if (d.symmetric) {
    Vector diag(d.eigenvalues.size());
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
      diag[i] = keep(d.eigenvalues[i]) ? std::exp(-d.eigenvalues[i] * dt) : 0.0;
    }
    return d.eigenvectors * diag.asDiagonal() * d.eigenvectors.transpose();
  }
  Eigen::VectorXcd diag(d.eigenvalues_c.size());
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    diag[i] = keep(d.eigenvalues_c[i].real()) ? std::exp(-d.eigenvalues_c[i] * dt)
                                              : std::complex<double>(0.0, 0.0);
  }
  return (d.eigenvectors_c * diag.asDiagonal() * d.eigenvectors_c_inv).real();
}

void measure_constants(Dichotomy& d) {
  const auto report = verify_dichotomy_bounds(d, default_dichotomy_grid());
  d.M = report.M;
  d.M1 = report.M1;
}

}  // namespace

std::vector<double> default_dichotomy_grid() {
  std::vector<double> grid;
  const int n = 121;
  for (int i = 0; i < n; ++i) {
    const double t = std::pow(10.0, -4.0 + 6.0 * i / (n - 1));
    grid.push_back(t);
    grid.push_back(-t);
  }
  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());
  return grid;
}

Dichotomy build_dichotomy_from_matrix(const Matrix& A, const Vector& norm_weights, double alpha) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw DomainError("build_dichotomy: linearization must be a nonempty square matrix");
  }
  if (norm_weights.size() != 0 && norm_weights.size() != A.rows()) {
    throw DomainError("build_dichotomy: norm weights have wrong length");
  }
  Dichotomy d;
  d.A = A;
  d.alpha = alpha;
  d.norm_weights =
      norm_weights.size() == 0 ? Vector::Ones(A.rows()) : norm_weights;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  d.symmetric = (A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;

  if (d.symmetric) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (A + A.transpose()));
    d.eigenvalues = eig.eigenvalues();
    d.eigenvectors = eig.eigenvectors();
  } else {
    Eigen::EigenSolver<Matrix> eig(A);
    d.eigenvalues_c = eig.eigenvalues();
    d.eigenvectors_c = eig.eigenvectors();
    d.eigenvectors_c_inv = d.eigenvectors_c.inverse();
    d.eigenvalues = d.eigenvalues_c.real();
  }

  d.beta = d.eigenvalues.cwiseAbs().minCoeff();
  if (!(d.beta > kHyperbolicTol * scale)) {
    throw DomainError("build_dichotomy: linearization is not hyperbolic (spectral gap " +
                      std::to_string(d.beta) + ")");
  }
  d.rank = static_cast<int>((d.eigenvalues.array() < 0.0).count());
  d.projection = restricted_exponential(d, 0.0, [](double mu) { return mu < 0.0; });
  measure_constants(d);
  return d;
}

Dichotomy build_dichotomy(const SystemSpec& spec, const Equilibrium& eq) {
  if (eq.state.size() != spec.N()) throw DomainError("build_dichotomy: state has wrong length");
  if (!(eq.gap > kHyperbolicTol)) {
    throw DomainError("build_dichotomy: equilibrium is not hyperbolic");
  }
  Matrix A = -jacobian(spec, eq.state);
  A.diagonal() += spec.linear_eigs();
  A = 0.5 * (A + A.transpose());
  return build_dichotomy_from_matrix(A, spec.alpha_weights(), spec.alpha());
}

Matrix stable_propagator(const Dichotomy& d, double dt) {
  if (dt < 0.0) throw DomainError("propagate_stable: dt must be nonnegative");
  return restricted_exponential(d, dt, [](double mu) { return mu > 0.0; });
}

Matrix unstable_propagator(const Dichotomy& d, double dt) {
  if (dt > 0.0) throw DomainError("propagate_unstable: dt must be nonpositive");
  return restricted_exponential(d, dt, [](double mu) { return mu < 0.0; });
}

Vector propagate_stable(const Dichotomy& d, double dt, const Vector& x) {
  if (x.size() != d.dimension()) throw DomainError("propagate_stable: vector has wrong length");
  if (dt < 0.0) throw DomainError("propagate_stable: dt must be nonnegative");
  if (!d.symmetric) return stable_propagator(d, dt) * x;
  Vector c = d.eigenvectors.transpose() * x;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c[i] = d.eigenvalues[i] > 0.0 ? c[i] * std::exp(-d.eigenvalues[i] * dt) : 0.0;
  }
  return d.eigenvectors * c;
}

Vector propagate_unstable(const Dichotomy& d, double dt, const Vector& x) {
  if (x.size() != d.dimension()) throw DomainError("propagate_unstable: vector has wrong length");
  if (dt > 0.0) throw DomainError("propagate_unstable: dt must be nonpositive");
  if (!d.symmetric) return unstable_propagator(d, dt) * x;
  Vector c = d.eigenvectors.transpose() * x;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c[i] = d.eigenvalues[i] < 0.0 ? c[i] * std::exp(-d.eigenvalues[i] * dt) : 0.0;
  }
  return d.eigenvectors * c;
}

DichotomyBoundsReport verify_dichotomy_bounds(const Dichotomy& d,
                                              const std::vector<double>& t_samples,
                                              const std::vector<Vector>& directions) {
  DichotomyBoundsReport report;
  report.times = t_samples;
  std::sort(report.times.begin(), report.times.end());
  const Eigen::DiagonalMatrix<double, Eigen::Dynamic> W(d.norm_weights);

  auto norm_of = [&](const Matrix& B) {
    return directions.empty() ? operator_norm(B) : directional_norm(B, directions);
  };

  double prev_stable = -1.0;
  std::vector<double> unstable_norms;
  for (double t : report.times) {
    if (t >= 0.0) {
      const Matrix B = stable_propagator(d, t);
      const double n0 = norm_of(B);
      report.M_stable = std::max(report.M_stable, n0 * std::exp(d.beta * t));
      if (prev_stable >= 0.0 && n0 > prev_stable * (1.0 + 1e-12) + 1e-300) {
        report.monotone = false;
      }
      prev_stable = n0;
      if (t > 0.0) {
        const double n1 = norm_of(W * B);
        const double singular = std::max(1.0, std::pow(t, -d.alpha));
        report.M1_stable = std::max(report.M1_stable, n1 * std::exp(d.beta * t) / singular);
        report.M1_stable_without_singular_factor =
            std::max(report.M1_stable_without_singular_factor, n1 * std::exp(d.beta * t));
      }
    }
    if (t <= 0.0) {
      const Matrix B = unstable_propagator(d, t);
      const double n0 = norm_of(B);
      unstable_norms.push_back(n0);
      report.M_unstable = std::max(report.M_unstable, n0 * std::exp(-d.beta * t));
      report.M1_unstable =
          std::max(report.M1_unstable, norm_of(W * B) * std::exp(-d.beta * t));
    }
  }
  // Times ascend, so backward decay means the unstable norms are nondecreasing.
  for (std::size_t i = 1; i < unstable_norms.size(); ++i) {
    if (unstable_norms[i] < unstable_norms[i - 1] * (1.0 - 1e-12) - 1e-300) {
      report.monotone = false;
    }
  }
  report.M = std::max(report.M_stable, report.M_unstable);
  report.M1 = std::max(report.M1_stable, report.M1_unstable);
  return report;
}

}  // namespace apdyn
