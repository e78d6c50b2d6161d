#include "apdyn/dichotomy.hpp"
#include "apdyn/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace apdyn;

namespace {

Dichotomy diagonal_example() {
  Matrix A(2, 2);
  A << -2.0, 0.0, 0.0, 1.0;
  return build_dichotomy_from_matrix(A, Vector::Ones(2), 0.0);
}

}  // namespace

TEST_CASE("diagonal example splits into one unstable and one stable mode") {
  const auto d = diagonal_example();
  CHECK(d.rank == 1);
  CHECK(d.beta == doctest::Approx(1.0));
  CHECK(d.projection(0, 0) == doctest::Approx(1.0));
  CHECK(std::abs(d.projection(1, 1)) < 1e-14);

  Vector x(2);
  x << 3.0, 5.0;
  const Vector s = propagate_stable(d, 2.0, x);
  CHECK(std::abs(s[0]) < 1e-14);
  CHECK(s[1] == doctest::Approx(5.0 * std::exp(-2.0)));
  const Vector u = propagate_unstable(d, -1.5, x);
  CHECK(u[0] == doctest::Approx(3.0 * std::exp(-3.0)));
  CHECK(std::abs(u[1]) < 1e-14);
}

TEST_CASE("propagators form semigroups and the projection is idempotent") {
  const auto spec = assemble_chafee_infante(12, 5.0);
  const auto eqs = find_equilibria(spec);
  for (const auto& eq : eqs) {
    const auto d = build_dichotomy(spec, eq);
    CHECK(d.rank == eq.morse_index);
    CHECK((d.projection * d.projection - d.projection).norm() < 1e-10);
    CHECK((d.A * d.projection - d.projection * d.A).norm() < 1e-10);
    const Matrix s = stable_propagator(d, 0.7) * stable_propagator(d, 0.4);
    CHECK((s - stable_propagator(d, 1.1)).norm() < 1e-12);
    const Matrix u = unstable_propagator(d, -0.7) * unstable_propagator(d, -0.4);
    CHECK((u - unstable_propagator(d, -1.1)).norm() < 1e-12);
  }
}

TEST_CASE("self-adjoint linearizations attain unit constants") {
  const auto spec = assemble_chafee_infante(12, 5.0);
  for (const auto& eq : find_equilibria(spec)) {
    Dichotomy d = build_dichotomy(spec, eq);
    const Dichotomy plain = build_dichotomy_from_matrix(d.A, Vector::Ones(d.dimension()), 0.0);
    const auto rep = verify_dichotomy_bounds(plain, default_dichotomy_grid());
    CHECK(rep.M == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.M1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.monotone);
  }
}

TEST_CASE("fractional norm needs the t^-alpha factor near zero") {
  const auto spec = assemble_chafee_infante(32, 5.0);
  const auto eqs = find_equilibria(spec);
  const auto d = build_dichotomy(spec, eqs.back());
  const auto rep = verify_dichotomy_bounds(d, default_dichotomy_grid());
  CHECK(rep.M1_stable_without_singular_factor > 2.0 * rep.M1_stable);
}

TEST_CASE("non-hyperbolic matrices are rejected") {
  Matrix A(2, 2);
  A << 0.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(build_dichotomy_from_matrix(A, Vector::Ones(2), 0.0), DomainError);
  const auto d = diagonal_example();
  CHECK_THROWS_AS(propagate_stable(d, -1.0, Vector::Ones(2)), DomainError);
  CHECK_THROWS_AS(propagate_unstable(d, 1.0, Vector::Ones(2)), DomainError);
}
