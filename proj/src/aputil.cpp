#include "apdyn/aputil.hpp"

#include "apdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace apdyn {

SampledSignal signal_from_orbit(const OrbitGrid& orbit, const Vector& weights, int stride) {
  if (stride < 1) throw DomainError("signal_from_orbit: stride must be positive");
  const Eigen::Index count = (orbit.inner_hi - orbit.inner_lo) / stride + 1;
  SampledSignal s;
  s.t0 = orbit.time(orbit.inner_lo);
  s.dt = orbit.dt * stride;
  s.weights = weights;
  s.values.resize(orbit.values.rows(), count);
  for (Eigen::Index j = 0; j < count; ++j) {
    s.values.col(j) = orbit.values.col(orbit.inner_lo + j * stride);
  }
  return s;
}

std::vector<double> almost_periods(const SampledSignal& sig, double delta, double search_lo,
                                   double search_hi, double min_overlap) {
  const Eigen::Index K = sig.size();
  if (K < 2 || !(sig.dt > 0.0)) throw DomainError("almost_periods: signal needs two samples");
  if (!(delta > 0.0)) throw DomainError("almost_periods: delta must be positive");
  if (!(search_hi >= search_lo)) throw DomainError("almost_periods: empty search window");
  if (search_hi - search_lo > sig.duration() + 1e-9 * sig.dt) {
    throw DomainError("almost_periods: search window longer than the signal");
  }
  const double max_shift = (1.0 - min_overlap) * sig.duration();
  if (std::max(std::abs(search_lo), std::abs(search_hi)) > max_shift + 1e-9 * sig.dt) {
    throw DomainError("almost_periods: search window exceeds the admissible shifts");
  }

  // Scale once so that the comparisons use plain Euclidean norms.
  const Matrix v = sig.weights.size() ? Matrix(sig.weights.asDiagonal() * sig.values) : sig.values;
  const double d2 = delta * delta;
  const auto m_lo = static_cast<Eigen::Index>(std::ceil(search_lo / sig.dt - 1e-9));
  const auto m_hi = static_cast<Eigen::Index>(std::floor(search_hi / sig.dt + 1e-9));
  const Eigen::Index coarse = std::max<Eigen::Index>(1, K / 64);

  auto within = [&](Eigen::Index m, Eigen::Index stride) {
    const Eigen::Index a = std::max<Eigen::Index>(0, -m);
    const Eigen::Index b = std::min<Eigen::Index>(K, K - m);
    for (Eigen::Index j = a; j < b; j += stride) {
      if ((v.col(j + m) - v.col(j)).squaredNorm() >= d2) return false;
    }
    return true;
  };

  std::vector<double> periods;
  for (Eigen::Index m = m_lo; m <= m_hi; ++m) {
    if (within(m, coarse) && within(m, 1)) periods.push_back(static_cast<double>(m) * sig.dt);
  }
  return periods;
}

double inclusion_length(const std::vector<double>& periods, double domain_lo, double domain_hi) {
  if (periods.empty()) return domain_hi - domain_lo;
  double gap = std::max(periods.front() - domain_lo, domain_hi - periods.back());
  for (std::size_t i = 1; i < periods.size(); ++i) gap = std::max(gap, periods[i] - periods[i - 1]);
  return gap;
}

bool relative_density_check(const std::vector<double>& periods, double l, double domain_lo,
                            double domain_hi) {
  if (periods.empty()) return false;
  return inclusion_length(periods, domain_lo, domain_hi) <= l;
}

Eigen::VectorXcd bohr_coefficient(const SampledSignal& sig, double omega) {
  const Eigen::Index K = sig.size();
  if (K < 2) throw DomainError("bohr_coefficient: signal needs two samples");
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(sig.values.rows());
  // Rotate the phase incrementally; renormalize periodically against drift.
  const std::complex<double> rot = std::polar(1.0, -omega * sig.dt);
  std::complex<double> phase = std::polar(1.0, -omega * sig.t0);
  for (Eigen::Index j = 0; j < K; ++j) {
    if (j % 1024 == 0) phase = std::polar(1.0, -omega * sig.time(j));
    const double w = (j == 0 || j == K - 1) ? 0.5 : 1.0;
    acc += (w * phase) * sig.values.col(j).cast<std::complex<double>>();
    phase *= rot;
  }
  return acc * (sig.dt / sig.duration());
}

double mean_square(const SampledSignal& sig) {
  const Eigen::Index K = sig.size();
  if (K < 2) throw DomainError("mean_square: signal needs two samples");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < K; ++j) {
    const double w = (j == 0 || j == K - 1) ? 0.5 : 1.0;
    const double n = weighted_norm(sig.weights, sig.values.col(j));
    acc += w * n * n;
  }
  return acc * sig.dt / sig.duration();
}

std::vector<double> frequency_module(const std::vector<double>& generators, int max_order) {
  if (max_order < 0) throw DomainError("frequency_module: max_order must be nonnegative");
  std::vector<double> out;
  std::vector<int> k(generators.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int budget) {
    if (i == generators.size()) {
      double w = 0.0;
      for (std::size_t j = 0; j < k.size(); ++j) w += k[j] * generators[j];
      out.push_back(w);
      return;
    }
    for (int c = -budget; c <= budget; ++c) {
      k[i] = c;
      rec(i + 1, budget - std::abs(c));
    }
  };
  rec(0, max_order);
  std::sort(out.begin(), out.end());
  std::vector<double> unique;
  for (double w : out) {
    if (unique.empty() || std::abs(w - unique.back()) > 1e-9 * std::max(1.0, std::abs(w))) {
      unique.push_back(w);
    }
  }
  return unique;
}

double spectrum_concentration(const SampledSignal& sig, const std::vector<double>& generators,
                              int max_order) {
  const double ms = mean_square(sig);
  if (ms == 0.0) return 1.0;
  double captured = 0.0;
  for (double w : frequency_module(generators, max_order)) {
    const Eigen::VectorXcd a = bohr_coefficient(sig, w);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double wi = sig.weights.size() ? sig.weights[i] : 1.0;
      captured += wi * wi * std::norm(a[i]);
    }
  }
  return std::clamp(captured / ms, 0.0, 1.0);
}

}  // namespace apdyn
