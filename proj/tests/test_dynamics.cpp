#include "apdyn/dynamics.hpp"
#include "apdyn/errors.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace apdyn;
using testing_support::mode_forcing;

namespace {

struct Setup {
  SystemSpec spec = assemble_chafee_infante(8, 5.0);
  std::vector<Equilibrium> eqs = find_equilibria(spec);
  std::vector<Dichotomy> dich;
  std::vector<AlmostPeriodicSolution> aps;

  explicit Setup(const QuasiPeriodicForcing& f) {
    const auto family = mode_forcing(8, 1e-2);
    for (const auto& eq : eqs) {
      dich.push_back(build_dichotomy(spec, eq));
      const auto b = contraction_budget(spec, eq, dich.back(), family);
      aps.push_back(picard_iterate(spec, eq, dich.back(), f, b, {-80.0, 80.0, 1e-2, 1e-10}));
    }
  }
};

}  // namespace

TEST_CASE("unforced trajectories rest at equilibria") {
  const auto spec = assemble_chafee_infante(8, 5.0);
  const auto f = mode_forcing(8, 0.0);
  for (const auto& eq : find_equilibria(spec)) {
    const auto tr = integrate(spec, f, 0.0, eq.state, 10.0, 1e-2);
    CHECK((tr.states.col(tr.size() - 1) - eq.state).norm() < 1e-10);
  }
}

TEST_CASE("integrator converges at second order") {
  const auto spec = assemble_chafee_infante(8, 5.0);
  const auto f = mode_forcing(8, 0.5);
  Vector x0 = Vector::Zero(8);
  x0[0] = 0.8;
  x0[1] = -0.5;
  auto end = [&](double dt) {
    const auto tr = integrate(spec, f, 0.0, x0, 2.0, dt);
    return Vector(tr.states.col(tr.size() - 1));
  };
  const Vector a = end(0.02), b = end(0.01), c = end(0.005);
  const double ratio = (a - b).norm() / (b - c).norm();
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("solution operator is a cocycle") {
  const auto spec = assemble_chafee_infante(8, 5.0);
  const auto f = mode_forcing(8, 0.3);
  Vector x0 = Vector::Zero(8);
  x0[0] = -1.0;
  x0[2] = 0.4;
  const auto direct = integrate(spec, f, 1.0, x0, 4.0, 1e-2);
  const auto first = integrate(spec, f, 1.0, x0, 2.5, 1e-2);
  const auto second = integrate(spec, f, 2.5, first.states.col(first.size() - 1), 4.0, 1e-2);
  CHECK((direct.states.col(direct.size() - 1) - second.states.col(second.size() - 1)).norm() < 1e-12);
}

TEST_CASE("Liapunov function decreases without forcing") {
  const auto spec = assemble_chafee_infante(8, 5.0);
  const auto f = mode_forcing(8, 0.0);
  const Matrix X0 = sample_alpha_ball(spec, 3.0, 6, 5);
  for (int c = 0; c < X0.cols(); ++c) {
    const auto tr = integrate(spec, f, 0.0, X0.col(c), 5.0, 1e-2);
    double prev = liapunov_value(spec, tr.states.col(0));
    for (Eigen::Index j = 1; j < tr.size(); ++j) {
      const double v = liapunov_value(spec, tr.states.col(j));
      CHECK(v <= prev + 1e-10);
      prev = v;
    }
  }
}

TEST_CASE("bundle integration matches single runs") {
  const auto spec = assemble_chafee_infante(8, 5.0);
  const auto f = mode_forcing(8, 0.2);
  const Matrix X0 = sample_alpha_ball(spec, 2.0, 4, 9);
  const auto bundle = integrate_bundle(spec, f, 0.0, X0, 3.0, 1e-2, 2.0);
  for (int c = 0; c < 4; ++c) {
    const auto tr = integrate(spec, f, 0.0, X0.col(c), 3.0, 1e-2);
    CHECK((bundle.final_states.col(c) - tr.states.col(tr.size() - 1)).norm() < 1e-12);
    CHECK(bundle.tails[c].tau == doctest::Approx(2.0));
  }
}

TEST_CASE("samples of the alpha ball stay inside it") {
  const auto spec = assemble_chafee_infante(8, 5.0);
  const Matrix X = sample_alpha_ball(spec, 3.0, 200, 1);
  for (int c = 0; c < X.cols(); ++c) CHECK(alpha_norm(spec, X.col(c)) <= 3.0 + 1e-12);
  CHECK((X - sample_alpha_ball(spec, 3.0, 200, 1)).norm() == 0.0);
}

TEST_CASE("orbits started on an AP solution are classified to it") {
  const auto f = mode_forcing(8, 1e-2);
  Setup s(f);
  for (std::size_t i = 0; i < s.aps.size(); ++i) {
    // Short horizon: the origin amplifies the discretization mismatch like e^{4t}.
    const auto tr = integrate(s.spec, f, 0.0, s.aps[i].orbit.at(0.0), 3.0, 1e-3);
    const auto label = classify_omega_limit(s.spec, tr, s.aps, 2.0, 1e-3);
    CAPTURE(i);
    CAPTURE(trailing_distance(s.spec, tr, s.aps[i], 2.0));
    REQUIRE(label.has_value());
    CHECK(*label == static_cast<int>(i));
  }
  const Matrix X0 = sample_alpha_ball(s.spec, 3.0, 12, 4);
  const auto cls = classify_bundle(s.spec, f, s.aps, X0, 0.0, 30.0, 60.0, 10.0, 1e-3);
  for (const auto& l : cls.labels) {
    REQUIRE(l.has_value());
    CHECK(s.eqs[static_cast<std::size_t>(*l)].morse_index == 0);
  }
}

TEST_CASE("unstable samples: stable points are singletons, seeds rescale with the horizon") {
  const auto f = mode_forcing(8, 0.0);
  Setup s(f);
  const auto& stable = s.aps.back();
  REQUIRE(s.dich.back().rank == 0);
  CHECK(unstable_manifold_sample(s.spec, f, stable, s.dich.back(), 0.0, 10, 1e-3, 5.0).size() == 1);

  const std::size_t i = 1;
  REQUIRE(s.dich[i].rank == 1);
  const double mu = -s.dich[i].eigenvalues[0];
  const auto a = unstable_manifold_sample(s.spec, f, s.aps[i], s.dich[i], 0.0, 2, 1e-4, 4.0);
  const auto b = unstable_manifold_sample(s.spec, f, s.aps[i], s.dich[i], 0.0, 2,
                                          5e-5, 4.0 + std::log(2.0) / mu);
  REQUIRE(a.size() == 2);
  for (int k = 0; k < 2; ++k) {
    const double travel = (a[k] - s.eqs[i].state).norm();
    CHECK((a[k] - b[k]).norm() < 1e-3 * travel);
  }

  const auto& origin = s.aps[0];
  REQUIRE(s.dich[0].rank == 2);
  const auto ring = unstable_manifold_sample(s.spec, f, origin, s.dich[0], 0.0, 16, 1e-3, 1.0);
  CHECK(ring.size() == 16);
}

TEST_CASE("one-sided Hausdorff distance") {
  Matrix A(1, 3), B(1, 2);
  A << 0.0, 1.0, 5.0;
  B << 0.0, 4.0;
  const Vector w = Vector::Ones(1);
  CHECK(one_sided_hausdorff(A, B, w) == doctest::Approx(1.0));
  CHECK(one_sided_hausdorff(B, A, w) == doctest::Approx(1.0));
  Matrix C(1, 1);
  C << 10.0;
  CHECK(one_sided_hausdorff(C, A, w) == doctest::Approx(5.0));
  CHECK(one_sided_hausdorff(A, C, w) == doctest::Approx(10.0));
}

TEST_CASE("pullback cloud settles onto the unstable manifolds") {
  const auto f = mode_forcing(8, 1e-2);
  Setup s(f);
  InitBox box;
  box.points_per_axis = 7;
  const auto cloud = pullback_attractor_sample(s.spec, f, 0.0, box, {5.0, 10.0, 20.0}, 1e-2, 1e-2);
  std::vector<ManifoldSample> manifolds;
  for (std::size_t i = 0; i < s.aps.size(); ++i) {
    manifolds.push_back(unstable_manifold_union(s.spec, f, s.aps[i], s.dich[i], 0.0, 24,
                                                {1e-2, 2.5e-3, 6.25e-4}, 10.0));
  }
  const auto rep = structure_check(s.spec, cloud, manifolds, 2e-2);
  CHECK(rep.dimension_proxy == 2);
  CHECK(rep.within_tolerance);
  CHECK(init_box_points(box, 8).cols() == 49);
  CHECK_THROWS_AS(pullback_attractor_sample(s.spec, f, 0.0, box, {0.0, 0.1}, 1e-2, 1e-14),
                  ConvergenceError);
}

TEST_CASE("blow-up is reported with its time") {
  // A backward-unstable cubic: with the sign of the cubic reversed, large
  // data escape in finite time.
  Vector eigs(2);
  eigs << 1.0, 4.0;
  const SystemSpec spec(eigs, 5.0, 0.5, 0.0, -1.0);
  Vector x0(2);
  x0 << 20.0, 0.0;
  try {
    integrate(spec, mode_forcing(2, 0.0), 0.0, x0, 5.0, 1e-2);
    FAIL("expected an integration error");
  } catch (const IntegrationError& e) {
    CHECK(e.blowup_time() > 0.0);
    CHECK(e.blowup_time() <= 5.0);
  }
}
