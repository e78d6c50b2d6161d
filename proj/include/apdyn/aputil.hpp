#pragma once

#include "apdyn/ap_solver.hpp"
#include "apdyn/system.hpp"

#include <complex>
#include <vector>

namespace apdyn {

/// Uniformly sampled scalar or vector signal. Row i of `values` is component
/// i; vector values are compared in the norm with the given weights
/// (empty weights mean Euclidean).
struct SampledSignal {
  double t0 = 0.0;
  double dt = 0.0;
  Matrix values;  // d x K
  Vector weights;

  Eigen::Index size() const { return values.cols(); }
  double duration() const { return static_cast<double>(size() - 1) * dt; }
  double time(Eigen::Index j) const { return t0 + static_cast<double>(j) * dt; }
};

/// Scalar signal from samples of a function.
template <typename F>
SampledSignal sample_scalar(F&& f, double t0, double dt, Eigen::Index count) {
  SampledSignal s;
  s.t0 = t0;
  s.dt = dt;
  s.values.resize(1, count);
  for (Eigen::Index j = 0; j < count; ++j) s.values(0, j) = f(t0 + static_cast<double>(j) * dt);
  return s;
}

/// Inner window of an orbit grid, keeping every `stride`-th sample.
SampledSignal signal_from_orbit(const OrbitGrid& orbit, const Vector& weights, int stride = 1);

/// Grid shifts s = m dt with search_lo <= s <= search_hi and
/// sup_t ||sig(t + s) - sig(t)|| < delta over the overlap. Shifts whose
/// overlap covers less than min_overlap of the signal are not admissible.
std::vector<double> almost_periods(const SampledSignal& sig, double delta, double search_lo,
                                   double search_hi, double min_overlap = 0.5);

/// Largest gap between consecutive periods, counting the gaps to the ends of
/// [domain_lo, domain_hi]: the smallest l such that every subinterval of
/// length l contains a period.
double inclusion_length(const std::vector<double>& periods, double domain_lo, double domain_hi);

/// True iff every subinterval of the domain of length l contains a period.
bool relative_density_check(const std::vector<double>& periods, double l, double domain_lo,
                            double domain_hi);

/// (1/T) int sig(t) e^{-i omega t} dt over the sampled window (trapezoid),
/// one entry per component.
Eigen::VectorXcd bohr_coefficient(const SampledSignal& sig, double omega);

/// Mean of ||sig(t)||^2 over the window (trapezoid).
double mean_square(const SampledSignal& sig);

/// All distinct sum_i k_i omega_i with sum |k_i| <= max_order (including 0
/// and negative frequencies), ascending.
std::vector<double> frequency_module(const std::vector<double>& generators, int max_order);

/// Fraction of the mean square carried by the Bohr coefficients on the
/// frequency module, clamped to [0, 1]. An identically zero signal counts as
/// fully concentrated.
double spectrum_concentration(const SampledSignal& sig, const std::vector<double>& generators,
                              int max_order = 3);

}  // namespace apdyn
