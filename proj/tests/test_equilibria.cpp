#include "apdyn/equilibria.hpp"
#include "apdyn/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace apdyn;

TEST_CASE("equilibrium counts follow the bifurcation ladder") {
  for (double lambda : {0.5, 2.0, 5.0, 8.0, 12.0}) {
    const auto spec = assemble_chafee_infante(24, lambda);
    const auto eqs = find_equilibria(spec);
    CAPTURE(lambda);
    CHECK(static_cast<int>(eqs.size()) == chafee_infante_count(lambda));
    for (const auto& e : eqs) CHECK(e.newton_residual < 1e-10);
  }
  CHECK(chafee_infante_count(0.5) == 1);
  CHECK(chafee_infante_count(5.0) == 5);
  CHECK(chafee_infante_count(10.0) == 7);
}

TEST_CASE("one-mode nonzero equilibrium has the closed form") {
  const double lambda = 5.0;
  const auto spec = assemble_chafee_infante(1, lambda);
  Vector x0(1);
  x0 << 1.0;
  const auto r = newton_solve(spec, x0);
  REQUIRE(std::holds_alternative<Equilibrium>(r));
  const double b = std::sqrt(2.0 * std::numbers::pi * (lambda - 1.0) / (3.0 * lambda));
  CHECK(std::get<Equilibrium>(r).state[0] == doctest::Approx(b).epsilon(1e-12));
  CHECK(std::get<Equilibrium>(r).morse_index == 0);
}

TEST_CASE("equilibria come in odd pairs with matching spectra") {
  const auto spec = assemble_chafee_infante(24, 5.0);
  const auto eqs = find_equilibria(spec);
  REQUIRE(eqs.size() == 5);
  CHECK(eqs[0].state.norm() < 1e-12);
  CHECK(eqs[0].morse_index == 2);
  for (const auto& e : eqs) {
    if (e.state.norm() < 1e-12) continue;
    bool mirrored = false;
    for (const auto& o : eqs) mirrored = mirrored || (o.state + e.state).norm() < 1e-9;
    CHECK(mirrored);
  }
  const auto hyp = hyperbolicity_report(eqs, 1e-2);
  CHECK(hyp.all_hyperbolic());
  CHECK(hyp.min_gap > 0.05);
}

TEST_CASE("Liapunov gradient matches finite differences and vanishes at equilibria") {
  const auto spec = assemble_chafee_infante(8, 5.0);
  Vector u(8);
  u << 0.8, -0.3, 0.2, 0.1, 0.0, -0.05, 0.02, 0.01;
  const Vector g = liapunov_gradient(spec, u);
  const double h = 1e-6;
  for (int k = 0; k < 8; ++k) {
    Vector e = Vector::Zero(8);
    e[k] = h;
    const double fd = (liapunov_value(spec, u + e) - liapunov_value(spec, u - e)) / (2 * h);
    CHECK(g[k] == doctest::Approx(fd).epsilon(1e-6));
  }
  for (const auto& eq : find_equilibria(spec)) CHECK(liapunov_gradient(spec, eq.state).norm() < 1e-9);
}

TEST_CASE("Newton reports failure instead of throwing") {
  const auto spec = assemble_chafee_infante(4, 5.0);
  const Vector x0 = Vector::Constant(4, 1e6);
  const auto r = newton_solve(spec, x0, 1e-12, 3);
  REQUIRE(std::holds_alternative<NewtonFailure>(r));
  CHECK(!std::get<NewtonFailure>(r).describe().empty());
  CHECK_THROWS_AS(newton_solve(spec, Vector::Zero(3)), DomainError);
}
