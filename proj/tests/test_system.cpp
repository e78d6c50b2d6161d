#include "apdyn/errors.hpp"
#include "apdyn/system.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace apdyn;

TEST_CASE("one mode reduces to the closed-form cubic") {
  const double lambda = 5.0;
  const auto spec = assemble_chafee_infante(1, lambda);
  for (double b : {-1.3, -0.2, 0.0, 0.7, 2.1}) {
    Vector u(1);
    u << b;
    const double expected = lambda * (b - 3.0 * b * b * b / (2.0 * std::numbers::pi));
    CHECK(nonlinearity(spec, u)[0] == doctest::Approx(expected).epsilon(1e-13));
    const double slope = lambda * (1.0 - 9.0 * b * b / (2.0 * std::numbers::pi));
    CHECK(jacobian(spec, u)(0, 0) == doctest::Approx(slope).epsilon(1e-13));
  }
}

TEST_CASE("collocated cubic matches an independent quadrature") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int N : {3, 8, 16}) {
    const auto spec = assemble_chafee_infante(N, 7.0);
    Vector u(N);
    for (int k = 0; k < N; ++k) u[k] = g(rng) / (k + 1);
    const Vector f = nonlinearity(spec, u);
    const Vector oracle = 7.0 * (u - testing_support::cubic_projection(u));
    CHECK((f - oracle).norm() < 1e-11 * (1.0 + oracle.norm()));
  }
}

TEST_CASE("jacobian agrees with central differences") {
  const auto spec = assemble_chafee_infante(6, 5.0);
  Vector u(6);
  u << 0.9, -0.4, 0.3, 0.1, -0.05, 0.02;
  const Matrix J = jacobian(spec, u);
  const double h = 1e-6;
  for (int k = 0; k < 6; ++k) {
    Vector e = Vector::Zero(6);
    e[k] = h;
    const Vector col = (nonlinearity(spec, u + e) - nonlinearity(spec, u - e)) / (2 * h);
    CHECK((J.col(k) - col).norm() < 1e-7);
  }
  CHECK((J - J.transpose()).norm() < 1e-12);
}

TEST_CASE("batch evaluation matches single columns") {
  const auto spec = assemble_chafee_infante(5, 3.0);
  Matrix U = Matrix::Random(5, 7);
  const Matrix F = nonlinearity_batch(spec, U);
  for (int j = 0; j < 7; ++j) CHECK((F.col(j) - nonlinearity(spec, U.col(j))).norm() < 1e-14);
}

TEST_CASE("alpha norm uses the k^(2 alpha) weights") {
  const auto spec = assemble_chafee_infante(3, 2.0);
  Vector x(3);
  x << 1.0, 1.0, 1.0;
  CHECK(alpha_norm(spec, x) == doctest::Approx(std::sqrt(1.0 + 4.0 + 9.0)));
  CHECK(spec.lambda() == 2.0);
  CHECK(spec.with_lambda(3.0).lambda() == 3.0);
}

TEST_CASE("forcing evaluation and validation") {
  const auto f = testing_support::mode_forcing(4, 0.5, 2, 2.0);
  validate_forcing(f, 4);
  CHECK(f.uniform_bound() == doctest::Approx(0.5 * 2.0 * 2.0));
  const Vector g = forcing_eval(f, 0.0);
  CHECK(g[1] == doctest::Approx(0.5 * 2.0 * 2.0));
  CHECK(g[0] == 0.0);
  CHECK_THROWS_AS(validate_forcing(f, 3), DomainError);
  auto bad = f;
  bad.frequencies[0] = -1.0;
  CHECK_THROWS_AS(validate_forcing(bad, 4), DomainError);
}

TEST_CASE("invalid specifications are rejected") {
  CHECK_THROWS_AS(assemble_chafee_infante(0, 1.0), DomainError);
  CHECK_THROWS_AS(assemble_chafee_infante(3, -1.0), DomainError);
  const auto spec = assemble_chafee_infante(3, 2.0);
  CHECK_THROWS_AS(nonlinearity(spec, Vector::Zero(2)), DomainError);
}
