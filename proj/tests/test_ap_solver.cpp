#include "apdyn/ap_solver.hpp"
#include "apdyn/errors.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace apdyn;
using testing_support::mode_forcing;

namespace {

Dichotomy scalar(double mu) {
  Matrix A(1, 1);
  A << mu;
  return build_dichotomy_from_matrix(A, Vector::Ones(1), 0.0);
}

SourceFn cosine_source() {
  return [](const Vector& t, const Matrix&) -> Matrix { return t.array().cos().matrix().transpose(); };
}

ApGridOptions short_grid() { return {-40.0, 40.0, 1e-2, 1e-10}; }

}  // namespace

TEST_CASE("scalar Green's operator reproduces the bounded solution") {
  for (double mu : {2.0, 0.5, -0.5, -2.0}) {
    CAPTURE(mu);
    const auto d = scalar(mu);
    const double tail = tail_length(std::abs(mu), 1e-12);
    const auto y = make_orbit_grid(1, 0.0, 20.0, 1e-3, tail);
    const auto Fy = apply_greens(d, cosine_source(), tail, y);
    double err = 0.0;
    for (Eigen::Index j = Fy.inner_lo; j <= Fy.inner_hi; ++j) {
      const double t = Fy.time(j);
      const double exact = (mu * std::cos(t) + std::sin(t)) / (mu * mu + 1.0);
      err = std::max(err, std::abs(Fy.values(0, j) - exact));
    }
    CHECK(err < 1e-6);
  }
}

TEST_CASE("Green's operator refuses windows shorter than two tails") {
  const auto d = scalar(1.0);
  const auto y = make_orbit_grid(1, 0.0, 5.0, 1e-2, 2.0);
  CHECK_THROWS_AS(apply_greens(d, cosine_source(), 10.0, y), DomainError);
  Matrix B(2, 2);
  B << 1.0, 3.0, 0.0, -1.0;
  const auto skew = build_dichotomy_from_matrix(B, Vector::Ones(2), 0.0);
  const auto y2 = make_orbit_grid(2, 0.0, 30.0, 1e-2, 5.0);
  CHECK_THROWS_AS(apply_greens(skew, cosine_source(), 5.0, y2), DomainError);
}

TEST_CASE("remainder vanishes to second order and matches the one-mode formula") {
  const double lambda = 5.0;
  const auto spec1 = assemble_chafee_infante(1, lambda);
  const auto eqs1 = find_equilibria(spec1);
  const double c = 3.0 / (2.0 * std::numbers::pi);
  for (const auto& eq : eqs1) {
    const double b = eq.state[0];
    for (double y : {-0.3, 0.1, 0.4}) {
      Vector v(1);
      v << y;
      const double expected = -lambda * c * (3.0 * b * y * y + y * y * y);
      CHECK(remainder_h(spec1, eq, v)[0] == doctest::Approx(expected).epsilon(1e-10));
    }
  }

  const auto spec = assemble_chafee_infante(8, lambda);
  const auto eqs = find_equilibria(spec);
  const auto& eq = eqs.back();
  CHECK(remainder_h(spec, eq, Vector::Zero(8)).norm() == 0.0);
  Vector dir = Vector::LinSpaced(8, 1.0, -0.5);
  const double r1 = remainder_h(spec, eq, 1e-3 * dir).norm();
  const double r2 = remainder_h(spec, eq, 2e-3 * dir).norm();
  CHECK(r2 / r1 == doctest::Approx(4.0).epsilon(1e-2));

  const Matrix Y = 0.3 * Matrix::Random(8, 5);
  const Matrix H = remainder_batch(spec, eq, Y);
  for (int j = 0; j < 5; ++j) CHECK((H.col(j) - remainder_h(spec, eq, Y.col(j))).norm() < 1e-12);
}

TEST_CASE("budget constants for the half-power norm") {
  const auto spec = assemble_chafee_infante(8, 5.0);
  const auto eqs = find_equilibria(spec);
  const auto d = build_dichotomy(spec, eqs[0]);
  const auto b = contraction_budget(spec, eqs[0], d, mode_forcing(8, 1e-2));
  CHECK(b.gamma_factor == doctest::Approx(std::sqrt(std::numbers::pi)));
  CHECK(b.delta0 <= 1.0);
  CHECK(b.delta0 == doctest::Approx(std::min(1.0, b.delta1)));
  CHECK(b.sampled_h_sup <= b.h_bound * (1.0 + 1e-9));
  CHECK(b.eps_threshold > 0.0);
}

TEST_CASE("ball radius agrees with a brute-force search at the origin") {
  // At the origin h' is homogeneous of degree two, so the admissible radius
  // is sqrt(bound / max over the unit sphere).
  const int N = 4;
  const auto spec = assemble_chafee_infante(N, 5.0);
  const auto eqs = find_equilibria(spec);
  const auto d = build_dichotomy(spec, eqs[0]);
  const auto b = contraction_budget(spec, eqs[0], d, mode_forcing(N, 1e-2));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  double best = 0.0;
  for (int i = 0; i < 20000; ++i) {
    Vector x(N);
    for (int k = 0; k < N; ++k) x[k] = g(rng);
    x /= alpha_norm(spec, x);
    best = std::max(best, remainder_derivative_norm(spec, eqs[0], x));
  }
  const double brute = std::sqrt(b.h_bound / best);
  CHECK(b.delta1 == doctest::Approx(brute).epsilon(0.05));
}

TEST_CASE("a linear vector field has the full unit ball") {
  const int N = 6;
  Vector eigs(N);
  for (int k = 0; k < N; ++k) eigs[k] = (k + 1.0) * (k + 1.0);
  const SystemSpec spec(eigs, 5.0, 0.5, 0.0, 0.0);
  const auto eq = characterize(spec, Vector::Zero(N), 0.0);
  const auto d = build_dichotomy(spec, eq);
  const auto b = contraction_budget(spec, eq, d, mode_forcing(N, 1e-2));
  CHECK(b.delta0 == 1.0);
}

TEST_CASE("zero forcing yields the equilibrium itself") {
  const auto spec = assemble_chafee_infante(8, 5.0);
  const auto eqs = find_equilibria(spec);
  for (const auto& eq : eqs) {
    const auto d = build_dichotomy(spec, eq);
    const auto f = mode_forcing(8, 0.0);
    const auto b = contraction_budget(spec, eq, d, mode_forcing(8, 1e-2));
    const auto ap = picard_iterate(spec, eq, d, f, b, short_grid());
    CHECK(ap.picard_iterations <= 1);
    CHECK(ap.deviation == 0.0);
  }
}

TEST_CASE("small forcing gives a residual-free orbit near each equilibrium") {
  const auto spec = assemble_chafee_infante(8, 5.0);
  const auto f = mode_forcing(8, 1e-2);
  for (const auto& eq : find_equilibria(spec)) {
    const auto d = build_dichotomy(spec, eq);
    const auto b = contraction_budget(spec, eq, d, f);
    REQUIRE(f.epsilon < b.eps_threshold);
    const auto ap = picard_iterate(spec, eq, d, f, b, short_grid());
    CHECK(ap.deviation <= b.delta0);
    CHECK(ap.deviation > 0.0);
    CHECK(ap.fixed_point_residual < 1e-10);
    CHECK(ap.ode_residual < 1e-4);
    CHECK(ap.contraction_factor <= 0.5);
  }
}

TEST_CASE("truncated tails converge") {
  const auto spec = assemble_chafee_infante(8, 5.0);
  const auto eqs = find_equilibria(spec);
  const auto& eq = eqs[1];
  const auto d = build_dichotomy(spec, eq);
  const auto f = mode_forcing(8, 1e-2);
  const auto y = make_orbit_grid(8, -20.0, 20.0, 1e-2, tail_length(d.beta, 1e-12));
  const auto coarse = greens_operator(spec, eq, d, f, y, 1e-4);
  const auto fine = greens_operator(spec, eq, d, f, y, 1e-10);
  const double scale = fine.inner_sup(d.norm_weights);
  CHECK(inner_distance(coarse, fine, d.norm_weights) < 1e-3 * scale);
  const auto finer = greens_operator(spec, eq, d, f, y, 1e-12);
  CHECK(inner_distance(finer, fine, d.norm_weights) < 1e-8 * scale);
}

TEST_CASE("budget violations and expanding maps are reported") {
  const auto spec = assemble_chafee_infante(8, 5.0);
  const auto eqs = find_equilibria(spec);
  const auto d = build_dichotomy(spec, eqs[0]);
  const auto family = mode_forcing(8, 1e-2);
  const auto b = contraction_budget(spec, eqs[0], d, family);
  const auto loud = family.with_epsilon(2.0 * b.eps_threshold);
  CHECK_THROWS_AS(picard_iterate(spec, eqs[0], d, loud, b, short_grid()), BudgetError);
  CHECK_THROWS_AS(picard_iterate(spec, eqs[0], d, loud, b, short_grid()), PreconditionError);

  const auto s = scalar(1.0);
  const SourceFn expanding = [](const Vector& t, const Matrix& y) -> Matrix {
    return (3.0 * y.array() + t.transpose().array().cos()).matrix();
  };
  const double tail = tail_length(1.0, 1e-10);
  const auto y0 = make_orbit_grid(1, 0.0, 10.0, 1e-2, tail);
  CHECK_THROWS_AS(solve_fixed_point(s, expanding, tail, y0, 1e-12, 50), DivergenceError);
}

TEST_CASE("orbit grid interpolates and guards its window") {
  auto g = make_orbit_grid(1, 0.0, 1.0, 0.5, 0.0);
  g.values << 0.0, 1.0, 3.0;
  CHECK(g.at(0.25)[0] == doctest::Approx(0.5));
  CHECK(g.at(0.75)[0] == doctest::Approx(2.0));
  CHECK_THROWS_AS(g.at(1.5), DomainError);
}
