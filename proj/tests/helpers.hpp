#pragma once

#include "apdyn/system.hpp"

#include <cmath>
#include <numbers>

namespace testing_support {

// Projection of u^3 onto sqrt(2/pi) sin(kx), by trapezoid on a fine grid.
// The integrand extends to a smooth odd 2pi-periodic function, so the rule
// converges spectrally and is independent of the collocation inside the model.
inline Eigen::VectorXd cubic_projection(const Eigen::VectorXd& coeffs, int points = 4096) {
  const int N = static_cast<int>(coeffs.size());
  const double c = std::sqrt(2.0 / std::numbers::pi);
  const double h = std::numbers::pi / points;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(N);
  for (int j = 1; j < points; ++j) {
    const double x = j * h;
    double u = 0.0;
    for (int k = 1; k <= N; ++k) u += coeffs[k - 1] * c * std::sin(k * x);
    const double u3 = u * u * u;
    for (int k = 1; k <= N; ++k) out[k - 1] += h * u3 * c * std::sin(k * x);
  }
  return out;
}

inline apdyn::QuasiPeriodicForcing mode_forcing(int N, double eps, int mode = 1, double scale = 1e-2) {
  Eigen::VectorXd profile = Eigen::VectorXd::Zero(N);
  profile[mode - 1] = scale;
  return apdyn::incommensurate_forcing(eps, profile);
}

}  // namespace testing_support
