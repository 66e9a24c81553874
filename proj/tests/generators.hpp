#pragma once

// Seeded random-instance generators shared by the property tests and the
// acceptance suite.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "evsys/event_system.hpp"

namespace evsys::test {

class TestRng {
 public:
  explicit TestRng(std::uint32_t seed) : engine_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  std::mt19937& engine() { return engine_; }

 private:
  std::mt19937 engine_;
};

inline std::vector<std::string> make_species(Index n) {
  std::vector<std::string> names;
  for (Index i = 0; i < n; ++i) names.push_back("X" + std::to_string(i + 1));
  return names;
}

inline Monomial make_monomial(std::vector<int> exps) {
  ExponentVector e(static_cast<Index>(exps.size()));
  for (std::size_t i = 0; i < exps.size(); ++i) e[static_cast<Index>(i)] = exps[i];
  return Monomial(std::move(e));
}

inline Monomial random_monomial(TestRng& rng, Index n, int max_degree, int min_degree = 0) {
  const int degree = rng.uniform(min_degree, max_degree);
  ExponentVector e = ExponentVector::Zero(n);
  for (int d = 0; d < degree; ++d) e[rng.uniform(0, static_cast<int>(n) - 1)] += 1;
  return Monomial(std::move(e));
}

inline std::pair<Monomial, Monomial> random_distinct_pair(TestRng& rng, Index n,
                                                          int max_degree,
                                                          bool allow_constant = false) {
  const int min_degree = allow_constant ? 0 : 1;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Monomial m = random_monomial(rng, n, max_degree, min_degree);
    Monomial nn = random_monomial(rng, n, max_degree, min_degree);
    if (!(m == nn)) return {std::move(m), std::move(nn)};
  }
  throw Error("random pair generation stalled");
}

inline Rational random_rate(TestRng& rng) {
  return Rational(rng.uniform(1, 99), rng.uniform(1, 99));
}

inline Rational random_small_rate(TestRng& rng) {
  static const Rational choices[] = {Rational(1), Rational(2), Rational(3), Rational(1, 2),
                                     Rational(1, 3)};
  return choices[rng.uniform(0, 4)];
}

inline std::vector<Rational> random_rational_point(TestRng& rng, Index n) {
  static const Rational choices[] = {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2),
                                     Rational(3)};
  std::vector<Rational> c;
  for (Index i = 0; i < n; ++i) c.push_back(choices[rng.uniform(0, 4)]);
  return c;
}

inline RealVector to_real(const std::vector<Rational>& v) {
  RealVector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Index>(i)] = v[i].to_double();
  return out;
}

inline RealVector random_positive_state(TestRng& rng, Index n, double lo = 0.2,
                                        double hi = 2.5) {
  RealVector x(n);
  for (Index i = 0; i < n; ++i) x[i] = rng.real(lo, hi);
  return x;
}

inline bool contains_event(const std::vector<Event>& events, const Event& e) {
  for (const Event& prior : events) {
    if (prior == e) return true;
  }
  return false;
}

inline EventSystem random_physical_system(TestRng& rng, Index n, int m, int max_degree = 3,
                                          bool allow_constant = false) {
  std::vector<Event> events;
  int attempts = 0;
  while (static_cast<int>(events.size()) < m) {
    if (++attempts > 1000) throw Error("random system generation stalled");
    auto [a, b] = random_distinct_pair(rng, n, max_degree, allow_constant);
    Event e = canonicalize_event(random_rate(rng), std::move(a), random_rate(rng), std::move(b));
    if (!contains_event(events, e)) events.push_back(std::move(e));
  }
  return EventSystem(make_species(n), std::move(events));
}

struct NaturalSample {
  EventSystem system;
  std::vector<Rational> balance_point;
};

/// Detailed-balanced by construction: rates are scaled monomial values at a
/// rational point, so every Wegscheider product telescopes to exactly 1.
inline NaturalSample random_natural_system(TestRng& rng, Index n, int m, int max_degree = 3,
                                           bool allow_constant = false) {
  const std::vector<Rational> c = random_rational_point(rng, n);
  std::vector<Event> events;
  int attempts = 0;
  while (static_cast<int>(events.size()) < m) {
    if (++attempts > 1000) throw Error("random natural system generation stalled");
    auto [a, b] = random_distinct_pair(rng, n, max_degree, allow_constant);
    const Rational scale = random_small_rate(rng);
    const Rational sigma = scale * evaluate_exact(b, c);
    const Rational tau = scale * evaluate_exact(a, c);
    Event e = canonicalize_event(sigma, std::move(a), tau, std::move(b));
    if (!contains_event(events, e)) events.push_back(std::move(e));
  }
  return {EventSystem(make_species(n), std::move(events)), c};
}

struct AtomicSample {
  EventSystem system;
  std::vector<Rational> balance_point;
  std::vector<Index> atoms;
};

/// Natural atomic systems built from atom-preserving reactions: each
/// composite species has a formation reaction into its atom expansion, and
/// optional extra reactions rewrite composite products into pure-atom
/// monomials with the same atom content.
inline AtomicSample random_atomic_system(TestRng& rng) {
  const int n_atoms = rng.uniform(1, 2);
  const int n_comps = rng.uniform(1, 2);
  const Index n = n_atoms + n_comps;

  std::vector<ExponentVector> composition(static_cast<std::size_t>(n_comps));
  for (int k = 0; k < n_comps; ++k) {
    ExponentVector comp = ExponentVector::Zero(n);
    int total = 0;
    while (total < 2) {
      comp.setZero();
      total = 0;
      for (int a = 0; a < n_atoms; ++a) {
        comp[a] = rng.uniform(0, 2);
        total += comp[a];
      }
    }
    composition[static_cast<std::size_t>(k)] = std::move(comp);
  }

  const std::vector<Rational> c = random_rational_point(rng, n);
  std::vector<Event> events;
  auto add_balanced = [&](Monomial m, Monomial nn) {
    const Rational scale = random_small_rate(rng);
    const Rational sigma = scale * evaluate_exact(nn, c);
    const Rational tau = scale * evaluate_exact(m, c);
    Event e = canonicalize_event(sigma, std::move(m), tau, std::move(nn));
    if (!contains_event(events, e)) events.push_back(std::move(e));
  };

  for (int k = 0; k < n_comps; ++k) {
    add_balanced(Monomial::variable(n, n_atoms + k),
                 Monomial(composition[static_cast<std::size_t>(k)]));
  }

  if (rng.uniform(0, 1) == 1) {
    const int a = rng.uniform(0, n_comps - 1);
    const int b = rng.uniform(0, n_comps - 1);
    Monomial lhs = Monomial::variable(n, n_atoms + a) * Monomial::variable(n, n_atoms + b);
    Monomial rhs = Monomial(ExponentVector(composition[static_cast<std::size_t>(a)] +
                                           composition[static_cast<std::size_t>(b)]));
    add_balanced(std::move(lhs), std::move(rhs));
  }

  std::vector<Index> atoms;
  for (int a = 0; a < n_atoms; ++a) atoms.push_back(a);
  return {EventSystem(make_species(n), std::move(events)), c, atoms};
}

}  // namespace evsys::test
