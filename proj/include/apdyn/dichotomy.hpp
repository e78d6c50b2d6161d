#pragma once

#include "apdyn/equilibria.hpp"
#include "apdyn/system.hpp"

#include <Eigen/Dense>

#include <vector>

namespace apdyn {

/// Spectral splitting of the linearization A at a hyperbolic equilibrium.
///
/// P projects onto the eigenvectors with negative (real part of the)
/// eigenvalue, so e^{-At} P grows forward and decays backward while
/// e^{-At} (I - P) decays forward. For symmetric A the eigenbasis is
/// orthogonal and all propagators are evaluated exactly in it; a general
/// diagonalizable A goes through a complex eigendecomposition instead.
struct Dichotomy {
  Matrix A;
  Matrix projection;
  Vector eigenvalues;         // real parts, ascending for the symmetric path
  Matrix eigenvectors;        // orthonormal columns (symmetric path)
  Eigen::VectorXcd eigenvalues_c;
  Eigen::MatrixXcd eigenvectors_c;
  Eigen::MatrixXcd eigenvectors_c_inv;
  bool symmetric = true;
  int rank = 0;
  double beta = 0.0;
  double alpha = 0.0;
  Vector norm_weights;        // X^alpha weights
  double M = 1.0;
  double M1 = 1.0;

  int dimension() const { return static_cast<int>(A.rows()); }
};

/// Dichotomy of A = A0 - f'(x*), with M and M1 measured on the default grid.
Dichotomy build_dichotomy(const SystemSpec& spec, const Equilibrium& eq);

/// Dichotomy of an explicit matrix. `norm_weights` (length n) and `alpha`
/// describe the X^alpha norm; beta is the distance of the spectrum from the
/// imaginary axis.
Dichotomy build_dichotomy_from_matrix(const Matrix& A, const Vector& norm_weights, double alpha);

/// e^{-A dt} (I - P) x for dt >= 0.
Vector propagate_stable(const Dichotomy& d, double dt, const Vector& x);
/// e^{-A dt} P x for dt <= 0.
Vector propagate_unstable(const Dichotomy& d, double dt, const Vector& x);

/// Matrix forms of the two propagators (same sign conventions).
Matrix stable_propagator(const Dichotomy& d, double dt);
Matrix unstable_propagator(const Dichotomy& d, double dt);

struct DichotomyBoundsReport {
  double M_stable = 0.0;     // sup ||e^{-At}(I-P)|| e^{beta t},  t >= 0
  double M_unstable = 0.0;   // sup ||e^{-At}P|| e^{-beta t},     t <= 0
  double M1_stable = 0.0;    // sup ||e^{-At}(I-P)||_{X->X^a} e^{beta t} / max(1, t^-a)
  double M1_unstable = 0.0;  // sup ||e^{-At}P||_{X->X^a} e^{-beta t}
  double M1_stable_without_singular_factor = 0.0;  // same as M1_stable without max(1, t^-a)
  double M = 0.0;
  double M1 = 0.0;
  bool monotone = true;      // propagator norms decay away from t = 0
  std::vector<double> times;
};

/// Smallest constants that satisfy the four dichotomy estimates on the
/// sampled times. Positive samples probe the stable bound, nonpositive ones
/// the unstable bound. With `directions` empty the operator norms are exact;
/// otherwise the ratios are maximized over the given directions only.
DichotomyBoundsReport verify_dichotomy_bounds(const Dichotomy& d,
                                              const std::vector<double>& t_samples,
                                              const std::vector<Vector>& directions = {});

/// +-logspace(1e-4, 1e2) together with t = 0.
std::vector<double> default_dichotomy_grid();

}  // namespace apdyn
