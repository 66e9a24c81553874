#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "evsys/errors.hpp"
#include "evsys/rational.hpp"
#include "evsys/types.hpp"

namespace evsys {

/// Monic monomial over n species, stored as its exponent vector.
/// The constant monomial 1 is the all-zero vector.
class Monomial {
 public:
  Monomial() = default;

  explicit Monomial(ExponentVector exponents) : exponents_(std::move(exponents)) {
    for (Index i = 0; i < exponents_.size(); ++i) {
      if (exponents_[i] < 0) throw DomainError("monomial exponent must be non-negative");
    }
  }

  static Monomial one(Index n) { return Monomial(ExponentVector::Zero(n)); }

  static Monomial variable(Index n, Index i, int power = 1) {
    ExponentVector e = ExponentVector::Zero(n);
    e[i] = power;
    return Monomial(std::move(e));
  }

  Index dimension() const { return exponents_.size(); }
  int exponent(Index i) const { return exponents_[i]; }
  const ExponentVector& exponents() const { return exponents_; }
  int degree() const { return exponents_.size() == 0 ? 0 : exponents_.sum(); }
  bool is_one() const { return degree() == 0; }

  bool divides(const Monomial& other) const {
    if (dimension() != other.dimension()) throw DimensionError("monomial dimension mismatch");
    return (exponents_.array() <= other.exponents_.array()).all();
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.exponents_.size() == b.exponents_.size() &&
           (a.exponents_.array() == b.exponents_.array()).all();
  }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

 private:
  ExponentVector exponents_;
};

/// Strict order on monomials: a precedes b iff a != b and at the least index
/// where the exponents differ, a's exponent is the smaller.
inline bool precedes(const Monomial& a, const Monomial& b) {
  if (a.dimension() != b.dimension()) throw DimensionError("monomial dimension mismatch");
  for (Index i = 0; i < a.dimension(); ++i) {
    if (a.exponent(i) != b.exponent(i)) return a.exponent(i) < b.exponent(i);
  }
  return false;
}

inline Monomial operator*(const Monomial& a, const Monomial& b) {
  if (a.dimension() != b.dimension()) throw DimensionError("monomial dimension mismatch");
  return Monomial(a.exponents() + b.exponents());
}

/// a / b; requires b | a.
inline Monomial quotient(const Monomial& a, const Monomial& b) {
  if (!b.divides(a)) throw DomainError("monomial quotient requires divisibility");
  return Monomial(a.exponents() - b.exponents());
}

/// Value of the monomial at a point, for any dense Eigen vector expression.
template <class Derived>
typename Derived::Scalar evaluate(const Monomial& m, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() != m.dimension()) throw DimensionError("point dimension mismatch");
  Scalar value(1);
  for (Index i = 0; i < m.dimension(); ++i) {
    const Scalar xi = x[i];
    for (int k = 0; k < m.exponent(i); ++k) value *= xi;
  }
  return value;
}

inline Rational evaluate_exact(const Monomial& m, std::span<const Rational> x) {
  if (static_cast<Index>(x.size()) != m.dimension())
    throw DimensionError("point dimension mismatch");
  Rational value(1);
  for (Index i = 0; i < m.dimension(); ++i) {
    for (int k = 0; k < m.exponent(i); ++k) value = value * x[i];
  }
  return value;
}

inline std::string to_string(const Monomial& m, std::span<const std::string> species) {
  if (static_cast<Index>(species.size()) != m.dimension())
    throw DimensionError("species list dimension mismatch");
  std::string out;
  for (Index i = 0; i < m.dimension(); ++i) {
    const int e = m.exponent(i);
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    out += species[i];
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (Index i = 0; i < m.dimension(); ++i) {
      h ^= std::hash<int>{}(m.exponent(i)) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace evsys
