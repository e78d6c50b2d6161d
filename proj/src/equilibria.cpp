#include "apdyn/equilibria.hpp"

#include "apdyn/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace apdyn {

std::string NewtonFailure::describe() const {
  const char* tag = kind == NewtonFailureKind::Singular ? "singular" : "not converged";
  return std::string(tag) + " after " + std::to_string(iterations) +
         " iterations (residual " + std::to_string(residual) + ")";
}

Vector equilibrium_residual(const SystemSpec& spec, const Vector& x) {
  return spec.linear_eigs().cwiseProduct(x) - nonlinearity(spec, x);
}

Equilibrium characterize(const SystemSpec& spec, const Vector& state, double residual) {
  Matrix A = -jacobian(spec, state);
  A.diagonal() += spec.linear_eigs();
  // The collocation Jacobian is symmetric up to rounding.
  const Matrix sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);

  Equilibrium eq;
  eq.state = state;
  eq.spectrum = eig.eigenvalues();
  eq.morse_index = static_cast<int>((eq.spectrum.array() < 0.0).count());
  eq.gap = eq.spectrum.cwiseAbs().minCoeff();
  eq.newton_residual = residual;
  return eq;
}

NewtonResult newton_solve(const SystemSpec& spec, const Vector& x0, double tol, int max_iter) {
  if (x0.size() != spec.N()) throw DomainError("newton_solve: initial guess has wrong length");
  Vector x = x0;
  double res = 0.0;
  for (int it = 0; it <= max_iter; ++it) {
    const Vector r = equilibrium_residual(spec, x);
    res = r.norm();
    if (!std::isfinite(res)) {
      return NewtonFailure{NewtonFailureKind::NotConverged, it, res};
    }
    if (res < tol) return characterize(spec, x, res);
    if (it == max_iter) break;

    Matrix K = -jacobian(spec, x);
    K.diagonal() += spec.linear_eigs();
    Eigen::PartialPivLU<Matrix> lu(K);
    if (!(lu.rcond() > 1e-14)) {
      return NewtonFailure{NewtonFailureKind::Singular, it, res};
    }
    x -= lu.solve(r);
  }
  return NewtonFailure{NewtonFailureKind::NotConverged, max_iter, res};
}

namespace {

bool state_less(const Vector& a, const Vector& b) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > 1e-8) return a[k] > b[k];
  }
  return false;
}

class Collector {
 public:
  Collector(const SystemSpec& spec, double radius) : spec_(spec), radius_(radius) {}

  void offer(const NewtonResult& result) {
    const auto* eq = std::get_if<Equilibrium>(&result);
    if (eq == nullptr) return;
    for (const auto& known : found_) {
      if (alpha_norm(spec_, known.state - eq->state) <= radius_) return;
    }
    found_.push_back(*eq);
  }

  std::vector<Equilibrium> take() {
    std::sort(found_.begin(), found_.end(), [](const Equilibrium& a, const Equilibrium& b) {
      if (a.morse_index != b.morse_index) return a.morse_index > b.morse_index;
      return state_less(a.state, b.state);
    });
    return std::move(found_);
  }

 private:
  const SystemSpec& spec_;
  double radius_;
  std::vector<Equilibrium> found_;
};

}  // namespace

std::vector<Equilibrium> find_equilibria(const SystemSpec& spec,
                                         const EquilibriumSearchOptions& options) {
  const int N = spec.N();
  const double lam = spec.lambda();
  Collector collector(spec, options.dedup_radius);

  collector.offer(newton_solve(spec, Vector::Zero(N), options.newton_tol, options.max_iter));

  const int kmax = std::min(N, static_cast<int>(std::ceil(std::sqrt(std::max(lam, 0.0)))));
  for (int k = 1; k <= kmax; ++k) {
    for (double c : options.amplitude_grid) {
      for (double sign : {1.0, -1.0}) {
        Vector x0 = Vector::Zero(N);
        x0[k - 1] = sign * c;
        collector.offer(newton_solve(spec, x0, options.newton_tol, options.max_iter));
      }
    }
  }

  // Branches leave the origin at lambda = linear_eigs[k]; the one-mode balance
  // eig_k b = lambda (b - c 3 b^3 / (2 pi)) seeds each branch just past onset.
  if (spec.cubic() > 0.0) {
    for (int k = 0; k < N; ++k) {
      const double onset = spec.linear_eigs()[k];
      if (!(onset < lam)) break;
      for (double sign : {1.0, -1.0}) {
        double mu = std::min(onset + options.continuation_step, lam);
        Vector x = Vector::Zero(N);
        x[k] = sign * std::sqrt(2.0 * std::numbers::pi / (3.0 * spec.cubic()) * (1.0 - onset / mu));
        bool alive = true;
        while (alive) {
          const NewtonResult step =
              newton_solve(spec.with_lambda(mu), x, options.newton_tol, options.max_iter);
          if (const auto* eq = std::get_if<Equilibrium>(&step)) {
            x = eq->state;
          } else {
            alive = false;
            break;
          }
          if (mu >= lam) break;
          mu = std::min(mu + options.continuation_step, lam);
        }
        if (alive) collector.offer(newton_solve(spec, x, options.newton_tol, options.max_iter));
      }
    }
  }
  return collector.take();
}

double liapunov_value(const SystemSpec& spec, const Vector& u) {
  if (u.size() != spec.N()) throw DomainError("liapunov_value: state has wrong length");
  const double quadratic = (spec.linear_eigs().array() * u.array().square()).sum() -
                           spec.lambda() * u.squaredNorm();
  const Vector grid = spec.synthesis() * u;
  const double quartic = spec.quadrature_weight() * grid.array().pow(4).sum();
  return quadratic + 0.5 * spec.lambda() * spec.cubic() * quartic;
}

Vector liapunov_gradient(const SystemSpec& spec, const Vector& u) {
  return 2.0 * equilibrium_residual(spec, u);
}

HyperbolicityReport hyperbolicity_report(const std::vector<Equilibrium>& eqs, double threshold) {
  if (eqs.empty()) throw DomainError("hyperbolicity_report: no equilibria");
  HyperbolicityReport report;
  report.threshold = threshold;
  report.min_gap = eqs.front().gap;
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    report.gaps.push_back(eqs[i].gap);
    report.min_gap = std::min(report.min_gap, eqs[i].gap);
    if (eqs[i].gap < threshold) report.flagged.push_back(static_cast<int>(i));
  }
  return report;
}

int chafee_infante_count(double lambda) {
  return 2 * static_cast<int>(std::floor(std::sqrt(lambda))) + 1;
}

}  // namespace apdyn
