#pragma once

#include <span>
#include <string>
#include <utility>

#include "evsys/monomial.hpp"
#include "evsys/rational.hpp"

namespace evsys {

/// A reversible reaction in binomial form sigma*lo - tau*hi, with both rates
/// positive and lo preceding hi in the monomial order. Build through
/// canonicalize_event so the invariants hold.
struct Event {
  Rational sigma;
  Rational tau;
  Monomial lo;
  Monomial hi;

  friend bool operator==(const Event& a, const Event& b) {
    return a.sigma == b.sigma && a.tau == b.tau && a.lo == b.lo && a.hi == b.hi;
  }
};

/// Maps a reversible reaction (rate sigma away from m, rate tau away from n)
/// to its canonical event; the rates travel with their monomials when the
/// operands swap.
inline Event canonicalize_event(const Rational& sigma, Monomial m, const Rational& tau,
                                Monomial n) {
  if (!sigma.positive() || !tau.positive())
    throw PhysicalityError("event rates must be positive");
  if (m == n) throw InvalidEventError("event requires two distinct monomials");
  if (precedes(m, n)) return Event{sigma, tau, std::move(m), std::move(n)};
  return Event{tau, sigma, std::move(n), std::move(m)};
}

/// sigma*lo(x) - tau*hi(x).
template <class Derived>
double evaluate(const Event& e, const Eigen::MatrixBase<Derived>& x) {
  return e.sigma.to_double() * evaluate(e.lo, x) - e.tau.to_double() * evaluate(e.hi, x);
}

inline Rational evaluate_exact(const Event& e, std::span<const Rational> x) {
  return e.sigma * evaluate_exact(e.lo, x) - e.tau * evaluate_exact(e.hi, x);
}

inline std::string to_string(const Event& e, std::span<const std::string> species) {
  auto part = [&](const Rational& rate, const Monomial& m) {
    std::string mono = to_string(m, species);
    if (rate.is_one()) return mono == "1" ? std::string("1") : mono;
    std::string coeff = rate.den() == 1 ? to_string(rate) : "(" + to_string(rate) + ")";
    return mono == "1" ? coeff : coeff + "*" + mono;
  };
  return part(e.sigma, e.lo) + " - " + part(e.tau, e.hi);
}

}  // namespace evsys
