#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "evsys/event_system.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace evsys;
using test::make_monomial;

namespace {

EventSystem example_two_linear() {
  // { X2 - X1, X2 - 2*X1 }
  std::vector<Event> events{
      canonicalize_event(1, make_monomial({0, 1}), 1, make_monomial({1, 0})),
      canonicalize_event(1, make_monomial({0, 1}), 2, make_monomial({1, 0}))};
  return EventSystem({"X1", "X2"}, std::move(events));
}

EventSystem example_balanced_pair() {
  // { 6 - X1*X2, 2*X2^2 - 9*X1 }
  std::vector<Event> events{
      canonicalize_event(6, make_monomial({0, 0}), 1, make_monomial({1, 1})),
      canonicalize_event(2, make_monomial({0, 2}), 9, make_monomial({1, 0}))};
  return EventSystem({"X1", "X2"}, std::move(events));
}

}  // namespace

TEST_CASE("monomial order basics") {
  const Monomial x1 = make_monomial({1, 0});
  const Monomial x2 = make_monomial({0, 1});
  CHECK(precedes(x2, x1));
  CHECK_FALSE(precedes(x1, x2));
  CHECK_FALSE(precedes(x1, x1));

  // X1*X2^3 vs X1^2: the first differing index decides.
  CHECK(precedes(make_monomial({1, 3}), make_monomial({2, 0})));
  CHECK(precedes(Monomial::one(2), x1));
  CHECK_THROWS_AS(precedes(x1, Monomial::one(3)), DimensionError);
}

TEST_CASE("monomial order is total and transitive") {
  test::TestRng rng(101);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = rng.uniform(1, 6);
    const Monomial a = test::random_monomial(rng, n, 5);
    const Monomial b = test::random_monomial(rng, n, 5);
    const Monomial c = test::random_monomial(rng, n, 5);
    if (a == b) {
      CHECK_FALSE(precedes(a, b));
      CHECK_FALSE(precedes(b, a));
    } else {
      CHECK(precedes(a, b) != precedes(b, a));
    }
    if (precedes(a, b) && precedes(b, c)) CHECK(precedes(a, c));
  }
}

TEST_CASE("canonicalize orders the pair and keeps rates attached") {
  const Monomial x1 = make_monomial({1, 0});
  const Monomial x2 = make_monomial({0, 1});

  const Event e = canonicalize_event(Rational(1, 2), x1, Rational(1, 3), x2);
  CHECK(e.sigma == Rational(1, 3));
  CHECK(e.tau == Rational(1, 2));
  CHECK(e.lo == x2);
  CHECK(e.hi == x1);

  const Event same = canonicalize_event(Rational(1, 3), x2, Rational(1, 2), x1);
  CHECK(e == same);

  // sigma*X1^3*X2^2 vs tau*X1^2*X6^3 canonicalizes with the X6 side leading.
  const Monomial m = make_monomial({3, 2, 0, 0, 0, 0});
  const Monomial n = make_monomial({2, 0, 0, 0, 0, 3});
  const Event f = canonicalize_event(Rational(7), m, Rational(11), n);
  CHECK(f.sigma == Rational(11));
  CHECK(f.tau == Rational(7));
  CHECK(f.lo == n);
  CHECK(f.hi == m);
}

TEST_CASE("canonicalize idempotence") {
  test::TestRng rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = rng.uniform(1, 4);
    auto [a, b] = test::random_distinct_pair(rng, n, 4, true);
    const Event once = canonicalize_event(test::random_rate(rng), a, test::random_rate(rng), b);
    const Event twice = canonicalize_event(once.sigma, once.lo, once.tau, once.hi);
    CHECK(once == twice);
  }
}

TEST_CASE("canonicalize rejects invalid input") {
  const Monomial x1 = make_monomial({1, 0});
  CHECK_THROWS_AS(canonicalize_event(1, x1, 2, x1), InvalidEventError);
  CHECK_THROWS_AS(canonicalize_event(Rational(0), x1, 1, make_monomial({0, 1})),
                  PhysicalityError);
  CHECK_THROWS_AS(canonicalize_event(Rational(-1), x1, 1, make_monomial({0, 1})),
                  PhysicalityError);
}

TEST_CASE("stoichiometric matrix goldens") {
  // 0.5*X2^5 - 500*X1*X2^3*X7 over seven species.
  EventSystem single({"X1", "X2", "X3", "X4", "X5", "X6", "X7"},
                     {canonicalize_event(Rational(1, 2), make_monomial({0, 5, 0, 0, 0, 0, 0}),
                                         500, make_monomial({1, 3, 0, 0, 0, 0, 1}))});
  IntMatrix g = stoichiometric_matrix(single);
  REQUIRE(g.rows() == 1);
  IntVector expected(7);
  expected << 1, -2, 0, 0, 0, 0, 1;
  CHECK(g.row(0).transpose() == expected);

  IntMatrix g2 = stoichiometric_matrix(example_two_linear());
  CHECK(g2(0, 0) == 1);
  CHECK(g2(0, 1) == -1);
  CHECK(g2(1, 0) == 1);
  CHECK(g2(1, 1) == -1);

  IntMatrix g3 = stoichiometric_matrix(example_balanced_pair());
  CHECK(g3(0, 0) == 1);
  CHECK(g3(0, 1) == 1);
  CHECK(g3(1, 0) == 1);
  CHECK(g3(1, 1) == -2);
}

TEST_CASE("stoichiometric rows match divisibility counting") {
  test::TestRng rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = rng.uniform(1, 5);
    const EventSystem sys = test::random_physical_system(rng, n, rng.uniform(1, 4), 3, true);
    const IntMatrix gamma = stoichiometric_matrix(sys);
    for (std::size_t j = 0; j < sys.event_count(); ++j) {
      for (Index i = 0; i < n; ++i) {
        const int derived = test::times_divides(i, sys.event(j).hi) -
                            test::times_divides(i, sys.event(j).lo);
        CHECK(gamma(static_cast<Index>(j), i) == derived);
      }
    }
  }
}

TEST_CASE("event evaluation") {
  const EventSystem two = example_two_linear();
  RealVector x(2);
  x << 2, 3;
  CHECK(evaluate(two.event(0), x) == doctest::Approx(1.0));

  const EventSystem pair = example_balanced_pair();
  CHECK(evaluate(pair.event(0), x) == doctest::Approx(0.0));

  // Exact arithmetic at the balanced point: every event vanishes identically.
  const std::vector<Rational> xr{Rational(2), Rational(3)};
  CHECK(evaluate_exact(pair.event(0), xr).is_zero());
  CHECK(evaluate_exact(pair.event(1), xr).is_zero());
}

TEST_CASE("mass-action right-hand side") {
  const EventSystem two = example_two_linear();
  RealVector x(2);
  x << 2, 3;
  const RealVector p = mass_action_rhs(two, x);
  CHECK(p[0] == 0.0);
  CHECK(p[1] == 0.0);

  const EventSystem pair = example_balanced_pair();
  test::TestRng rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    RealVector y(2);
    y << rng.real(0.1, 3.0), rng.real(0.1, 3.0);
    const RealVector q = mass_action_rhs(pair, y);
    const double p1 = 6 - y[0] * y[1] + 2 * y[1] * y[1] - 9 * y[0];
    const double p2 = 6 - y[0] * y[1] - 4 * y[1] * y[1] + 18 * y[0];
    CHECK(q[0] == doctest::Approx(p1).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(p2).epsilon(1e-12));
  }
}

TEST_CASE("rhs equals the stoichiometric combination of event values") {
  test::TestRng rng(505);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = rng.uniform(1, 4);
    const EventSystem sys = test::random_physical_system(rng, n, rng.uniform(1, 4));
    const IntMatrix gamma = stoichiometric_matrix(sys);
    const RealVector x = test::random_positive_state(rng, n);
    const RealVector p = mass_action_rhs(sys, x);
    const RealVector e = evaluate_all_events(sys, x);
    for (Index i = 0; i < n; ++i) {
      double sum = 0.0;
      for (Index j = 0; j < gamma.rows(); ++j) sum += static_cast<double>(gamma(j, i)) * e[j];
      CHECK(std::abs(p[i] - sum) <= 1e-12 * (1.0 + std::abs(sum)));
    }
  }
}

TEST_CASE("every strong equilibrium is an equilibrium") {
  test::TestRng rng(606);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = rng.uniform(1, 3);
    const auto sample = test::random_natural_system(rng, n, rng.uniform(1, 3));
    const RealVector c = test::to_real(sample.balance_point);
    const RealVector e = evaluate_all_events(sample.system, c);
    const double flux = sample.system.max_rate() * std::pow(3.0, 3);
    CHECK(e.cwiseAbs().maxCoeff() <= 1e-12 * flux);
    const RealVector p = mass_action_rhs(sample.system, c);
    CHECK(p.cwiseAbs().maxCoeff() <= 1e-11 * flux);
  }
}

TEST_CASE("analytic jacobian matches finite differences") {
  // Single linear event: the Jacobian is constant in x.
  EventSystem linear({"X1", "X2"},
                     {canonicalize_event(1, make_monomial({0, 1}), 2, make_monomial({1, 0}))});
  RealVector a(2), b(2);
  a << 0.7, 1.9;
  b << 2.3, 0.4;
  CHECK(rhs_jacobian(linear, a) == rhs_jacobian(linear, b));

  const EventSystem pair = example_balanced_pair();
  RealVector x(2);
  x << 2, 3;
  const RealMatrix j = rhs_jacobian(pair, x);
  const RealMatrix fd = test::fd_jacobian(pair, x);
  for (Index r = 0; r < 2; ++r) {
    for (Index c = 0; c < 2; ++c) {
      CHECK(std::abs(j(r, c) - fd(r, c)) <= 1e-6 * (1.0 + std::abs(j(r, c))));
    }
  }

  test::TestRng rng(707);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = rng.uniform(1, 3);
    const EventSystem sys = test::random_physical_system(rng, n, rng.uniform(1, 3), 3, true);
    const RealVector y = test::random_positive_state(rng, n, 0.5, 2.0);
    const RealMatrix ja = rhs_jacobian(sys, y);
    const RealMatrix jf = test::fd_jacobian(sys, y);
    for (Index r = 0; r < n; ++r) {
      for (Index c = 0; c < n; ++c) {
        CHECK(std::abs(ja(r, c) - jf(r, c)) <= 1e-5 * (1.0 + std::abs(ja(r, c))));
      }
    }
  }
}

TEST_CASE("point classification") {
  RealVector positive(2), zpoint(2), other(2);
  positive << 2, 3;
  zpoint << 0, 1;
  other << -1, 1;
  CHECK(classify_point(positive) == PointClass::Positive);
  CHECK(classify_point(zpoint) == PointClass::NonNegativeZPoint);
  CHECK(classify_point(other) == PointClass::Other);
  RealVector bad(1);
  bad << std::nan("");
  CHECK(classify_point(bad) == PointClass::Other);
}

TEST_CASE("event-system construction rejects bad input") {
  CHECK_THROWS_AS(EventSystem({"X1"}, {}), InvalidEventError);
  const Event e = canonicalize_event(1, make_monomial({0, 1}), 1, make_monomial({1, 0}));
  CHECK_THROWS_AS(EventSystem({"X1", "X2"}, {e, e}), InvalidEventError);
  CHECK_THROWS_AS(EventSystem({"X1", "X1"}, {e}), DomainError);
  CHECK_THROWS_AS(EventSystem({"X1"}, {e}), DimensionError);
}
