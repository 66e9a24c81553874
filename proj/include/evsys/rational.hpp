#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "evsys/errors.hpp"

namespace evsys {

/// Exact rational on 64-bit numerator/denominator, always stored reduced
/// with a positive denominator. Arithmetic routes intermediates through
/// 128 bits and throws NumericError if a reduced result does not fit.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {}
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool positive() const { return num_ > 0; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// ln(num/den); requires a positive value.
  double log() const;

  Rational inverse() const;
  Rational operator-() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational pow(const Rational& base, std::int64_t exponent);

/// Accepts integers ("3", "-7"), fractions ("1/2"), and decimals ("0.25",
/// "2.5e-3"); decimals convert exactly via powers of ten.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);
std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace evsys
