#include "apdyn/aputil.hpp"
#include "apdyn/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace apdyn;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("almost periods of a cosine cluster at multiples of 2 pi") {
  const auto sig = sample_scalar([](double t) { return std::cos(t); }, 0.0, 1e-2, 20001);
  const auto periods = almost_periods(sig, 0.05, 1.0, 30.0);
  REQUIRE(!periods.empty());
  for (double p : periods) {
    const double k = std::round(p / kTwoPi);
    CHECK(k >= 1.0);
    CHECK(std::abs(p - k * kTwoPi) < 0.05);
  }
  for (int k = 1; k <= 4; ++k) {
    bool hit = false;
    for (double p : periods) hit = hit || std::abs(p - k * kTwoPi) < 0.01;
    CHECK(hit);
  }
}

TEST_CASE("a ramp has no almost periods") {
  const auto sig = sample_scalar([](double t) { return t; }, 0.0, 1e-2, 2001);
  CHECK(almost_periods(sig, 0.1, 1.0, 5.0).empty());
  CHECK_FALSE(relative_density_check({}, 100.0, 0.0, 1.0));
}

TEST_CASE("inclusion length counts the edges of the domain") {
  std::vector<double> p;
  for (int k = 0; k <= 10; ++k) p.push_back(7.0 * k);
  CHECK(inclusion_length(p, 0.0, 70.0) == doctest::Approx(7.0));
  CHECK(relative_density_check(p, 7.0, 0.0, 70.0));
  CHECK_FALSE(relative_density_check(p, 6.0, 0.0, 70.0));
  CHECK(inclusion_length({10.0}, 0.0, 50.0) == doctest::Approx(40.0));
}

TEST_CASE("search windows are checked against the signal") {
  const auto sig = sample_scalar([](double t) { return std::cos(t); }, 0.0, 0.1, 101);
  CHECK_THROWS_AS(almost_periods(sig, 0.1, 0.0, 20.0), DomainError);
  CHECK_THROWS_AS(almost_periods(sig, 0.1, 0.0, 8.0), DomainError);
  CHECK_NOTHROW(almost_periods(sig, 0.1, -5.0, 5.0));
}

TEST_CASE("Bohr coefficients of a cosine") {
  for (double T : {100.0, 400.0}) {
    const auto sig = sample_scalar([](double t) { return std::cos(t); }, 0.0, 1e-2,
                                   static_cast<Eigen::Index>(T / 1e-2) + 1);
    CHECK(std::abs(bohr_coefficient(sig, 1.0)[0] - 0.5) < 1.0 / T);
    CHECK(std::abs(bohr_coefficient(sig, -1.0)[0] - 0.5) < 1.0 / T);
    CHECK(std::abs(bohr_coefficient(sig, 2.3)[0]) < 2.0 / T);
    CHECK(std::abs(bohr_coefficient(sig, 0.0)[0]) < 1.0 / T);
  }
  const auto sig = sample_scalar([](double t) { return std::cos(t); }, 0.0, 1e-2, 40001);
  CHECK(mean_square(sig) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("Bohr coefficients are linear and conjugate-symmetric") {
  auto f = [](double t) { return 2.0 * std::cos(t) + 0.5 * std::sin(std::numbers::sqrt2 * t); };
  auto g = [](double t) { return std::cos(3.0 * t + 1.0); };
  const auto sf = sample_scalar(f, -50.0, 1e-2, 10001);
  const auto sg = sample_scalar(g, -50.0, 1e-2, 10001);
  const auto sh = sample_scalar([&](double t) { return 3.0 * f(t) - g(t); }, -50.0, 1e-2, 10001);
  for (double w : {0.7, 1.0, std::numbers::sqrt2, 3.0}) {
    const auto lhs = bohr_coefficient(sh, w)[0];
    const auto rhs = 3.0 * bohr_coefficient(sf, w)[0] - bohr_coefficient(sg, w)[0];
    CHECK(std::abs(lhs - rhs) < 1e-12);
    CHECK(std::abs(bohr_coefficient(sf, -w)[0] - std::conj(bohr_coefficient(sf, w)[0])) < 1e-12);
  }
}

TEST_CASE("white noise has vanishing Bohr coefficients") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  SampledSignal s;
  s.dt = 0.1;
  s.values.resize(1, 200001);
  for (Eigen::Index j = 0; j < s.values.cols(); ++j) s.values(0, j) = g(rng);
  for (double w : {0.5, 1.0, 2.0}) CHECK(std::abs(bohr_coefficient(s, w)[0]) < 0.01);
}

TEST_CASE("frequency module and spectrum concentration") {
  const auto mod = frequency_module({1.0, std::numbers::sqrt2}, 3);
  CHECK(mod.size() == 25);
  CHECK(mod.front() == doctest::Approx(-3.0 * std::numbers::sqrt2));
  const auto q = sample_scalar([](double t) { return std::cos(t) * std::cos(std::numbers::sqrt2 * t); },
                               -300.0, 1e-2, 60001);
  CHECK(spectrum_concentration(q, {1.0, std::numbers::sqrt2}) > 0.99);
  const auto off = sample_scalar([](double t) { return std::cos(std::numbers::pi * t); }, -300.0, 1e-2,
                                 60001);
  CHECK(spectrum_concentration(off, {1.0, std::numbers::sqrt2}) < 0.05);
  SampledSignal zero;
  zero.dt = 1.0;
  zero.values = Matrix::Zero(2, 10);
  CHECK(spectrum_concentration(zero, {1.0}) == 1.0);
}
