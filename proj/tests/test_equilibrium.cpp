#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "evsys/analysis.hpp"
#include "evsys/equilibrium.hpp"
#include "evsys/parser.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace evsys;
using test::make_monomial;

namespace {

EventSystem balanced_pair() {
  return EventSystem({"X1", "X2"},
                     {canonicalize_event(6, make_monomial({0, 0}), 1, make_monomial({1, 1})),
                      canonicalize_event(2, make_monomial({0, 2}), 9, make_monomial({1, 0}))});
}

EventSystem ab_exchange() { return parse_system("A <-> B ; kf=2 kr=1\n"); }

}  // namespace

TEST_CASE("base equilibrium of the balanced pair") {
  const RealVector c = base_strong_equilibrium(balanced_pair());
  CHECK(std::abs(c[0] - 2.0) <= 1e-9);
  CHECK(std::abs(c[1] - 3.0) <= 1e-9);
  CHECK(detailed_balance_residual(balanced_pair(), c) <= 1e-12);
}

TEST_CASE("base equilibrium of a single event") {
  EventSystem sys({"X1", "X2"},
                  {canonicalize_event(3, make_monomial({0, 1}), 5, make_monomial({1, 0}))});
  const RealVector c = base_strong_equilibrium(sys);
  // sigma rides with X2: balance means 3*c2 = 5*c1.
  CHECK(std::abs(3.0 * c[1] - 5.0 * c[0]) <= 1e-12 * (1.0 + 3.0 * c[1]));
  CHECK(std::abs(c[0] / c[1] - 3.0 / 5.0) <= 1e-12);
}

TEST_CASE("all rates equal gives the all-ones point") {
  const EventSystem sys = parse_system(
      "X1 + X2 <-> X3 ; kf=4 kr=4\n"
      "2 X1 <-> X2 ; kf=1/3 kr=1/3\n");
  const RealVector c = base_strong_equilibrium(sys);
  for (Index i = 0; i < c.size(); ++i) CHECK(std::abs(c[i] - 1.0) <= 1e-12);
}

TEST_CASE("non-natural systems have no base point") {
  EventSystem cycle({"X1", "X2"},
                    {canonicalize_event(2, make_monomial({0, 1}), 1, make_monomial({1, 0})),
                     canonicalize_event(1, make_monomial({0, 1}), 1, make_monomial({1, 0}))});
  CHECK_THROWS_AS(base_strong_equilibrium(cycle), NaturalityError);
}

TEST_CASE("class equilibrium on the two-species exchange") {
  const EventSystem sys = ab_exchange();
  const RealVector c_star = base_strong_equilibrium(sys);
  RealVector p(2);
  p << 2, 1;
  const EquilibriumResult r = class_equilibrium(sys, c_star, p);
  CHECK(std::abs(r.point[0] - 1.0) <= 1e-10);
  CHECK(std::abs(r.point[1] - 2.0) <= 1e-10);
  CHECK(r.detailed_balance_residual <= 1e-10);
  CHECK(r.class_residual <= 1e-10);

  // Starting the class at the base point returns it unchanged.
  const EquilibriumResult fixed = class_equilibrium(sys, c_star, c_star);
  CHECK((fixed.point - c_star).cwiseAbs().maxCoeff() <= 1e-12);

  RealVector bad(2);
  bad << 1, 0;
  CHECK_THROWS_AS(class_equilibrium(sys, c_star, bad), DomainError);
}

TEST_CASE("full-rank systems have a single class") {
  const EventSystem sys = balanced_pair();
  const RealVector c_star = base_strong_equilibrium(sys);
  RealVector p(2);
  p << 7, 11;
  const EquilibriumResult r = class_equilibrium(sys, c_star, p);
  CHECK(r.iterations == 0);
  CHECK(std::abs(r.point[0] - 2.0) <= 1e-9);
  CHECK(std::abs(r.point[1] - 3.0) <= 1e-9);
}

TEST_CASE("class equilibrium is unique within a class") {
  const EventSystem sys = ab_exchange();
  const RealVector c_star = base_strong_equilibrium(sys);
  const IntMatrix gamma = stoichiometric_matrix(sys);
  test::TestRng rng(1501);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = rng.real(0.05, 2.95);
    RealVector p(2), ref(2);
    p << a, 3.0 - a;
    ref << 2, 1;
    REQUIRE(same_conservation_class(gamma, p, ref));
    const EquilibriumResult r = class_equilibrium(sys, c_star, p);
    CHECK(std::abs(r.point[0] - 1.0) <= 1e-8);
    CHECK(std::abs(r.point[1] - 2.0) <= 1e-8);
  }
}

TEST_CASE("objective gradient matches finite differences") {
  test::TestRng rng(1601);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = rng.uniform(2, 4);
    const auto sample = test::random_natural_system(rng, n, rng.uniform(1, 3), 2);
    const KernelBasis kernel = right_kernel(stoichiometric_matrix(sample.system));
    if (kernel.count() == 0) continue;
    const RealMatrix k = kernel.vectors.cast<double>();
    const RealVector c_star = test::to_real(sample.balance_point);
    const RealVector p = test::random_positive_state(rng, n, 0.5, 2.0);
    RealVector y(kernel.count());
    for (Index i = 0; i < y.size(); ++i) y[i] = rng.real(-0.3, 0.3);

    const RealVector grad = class_objective_gradient(c_star, k, p, y);
    const RealVector fd = test::fd_gradient(
        [&](const RealVector& z) { return class_objective(c_star, k, p, z); }, y);
    for (Index i = 0; i < grad.size(); ++i) {
      CHECK(std::abs(grad[i] - fd[i]) <= 1e-5 * (1.0 + std::abs(grad[i])));
    }
  }
}

TEST_CASE("solver outputs satisfy detailed balance") {
  test::TestRng rng(1701);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = rng.uniform(1, 3);
    const auto sample = test::random_natural_system(rng, n, rng.uniform(1, 3), 2);
    const RealVector c_star = base_strong_equilibrium(sample.system);
    const RealVector p = test::random_positive_state(rng, n, 0.5, 2.0);
    const EquilibriumResult r = class_equilibrium(sample.system, c_star, p);
    const RealVector rhs = mass_action_rhs(sample.system, r.point);
    const double scale = sample.system.max_rate() *
                         std::max(1.0, r.point.cwiseAbs().maxCoeff());
    if (rhs.cwiseAbs().maxCoeff() <= 1e-12 * scale) {
      const RealVector events = evaluate_all_events(sample.system, r.point);
      CHECK(events.cwiseAbs().maxCoeff() <= 1e-9 * scale);
    }
    CHECK(r.detailed_balance_residual <= 1e-9);
  }
}

TEST_CASE("lyapunov values") {
  const EventSystem sys = ab_exchange();
  RealVector c(2);
  c << 1, 2;

  CHECK(lyapunov_value(sys, c, c).value == doctest::Approx(0.0));

  RealVector x(2);
  x << 2, 1;
  const LyapunovValue v = lyapunov_value(sys, c, x);
  CHECK(v.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  REQUIRE(v.gradient.has_value());
  CHECK((*v.gradient)[0] == doctest::Approx(std::log(2.0)));
  CHECK((*v.gradient)[1] == doctest::Approx(std::log(0.5)));

  // A zero component contributes exactly c_i and disables the gradient.
  RealVector z(2);
  z << 0, 2;
  const LyapunovValue vz = lyapunov_value(sys, c, z);
  CHECK(vz.value == doctest::Approx(1.0));
  CHECK_FALSE(vz.gradient.has_value());

  RealVector neg(2);
  neg << -1, 1;
  CHECK_THROWS_AS(lyapunov_value(sys, c, neg), DomainError);
}

TEST_CASE("orbital derivative closed form") {
  const EventSystem sys = balanced_pair();
  RealVector c(2), x(2);
  c << 2, 3;
  x << 1, 1;
  const double expected = 5.0 * std::log(1.0 / 6.0) - 7.0 * std::log(9.0 / 2.0);
  const double od = orbital_derivative(sys, c, x);
  CHECK(std::abs(od - expected) <= 1e-12 * std::abs(expected));

  // Same value through the gradient route.
  const LyapunovValue g = lyapunov_value(sys, c, x);
  REQUIRE(g.gradient.has_value());
  const double dot = g.gradient->dot(mass_action_rhs(sys, x));
  CHECK(std::abs(od - dot) <= 1e-12 * std::abs(od));

  CHECK(std::abs(orbital_derivative(sys, c, c)) <= 1e-12);

  RealVector zero(2);
  zero << 0, 1;
  CHECK_THROWS_AS(orbital_derivative(sys, c, zero), DomainError);
}

TEST_CASE("orbital derivative is nonpositive and matches the gradient route") {
  test::TestRng rng(1801);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = rng.uniform(1, 3);
    const auto sample = test::random_natural_system(rng, n, rng.uniform(1, 3));
    const RealVector c = test::to_real(sample.balance_point);
    for (int k = 0; k < 5; ++k) {
      const RealVector x = test::random_positive_state(rng, n);
      const double od = orbital_derivative(sample.system, c, x);
      CHECK(od <= 1e-12);
      const LyapunovValue g = lyapunov_value(sample.system, c, x);
      REQUIRE(g.gradient.has_value());
      const double dot = g.gradient->dot(mass_action_rhs(sample.system, x));
      CHECK(std::abs(od - dot) <= 1e-10 * (1.0 + std::abs(od)));
    }
  }
}
