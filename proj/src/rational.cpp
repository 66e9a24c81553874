#include "evsys/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>

namespace evsys {

namespace {

using Int128 = __int128;

Int128 abs128(Int128 v) { return v < 0 ? -v : v; }

Int128 gcd128(Int128 a, Int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    Int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(Int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw NumericError("rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

Rational make_reduced(Int128 num, Int128 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return Rational(0);
  Int128 g = gcd128(num, den);
  return Rational(narrow(num / g), narrow(den / g));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Int128 n = num;
  Int128 d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) {
    num_ = 0;
    den_ = 1;
    return;
  }
  Int128 g = gcd128(n, d);
  num_ = narrow(n / g);
  den_ = narrow(d / g);
}

double Rational::log() const {
  if (num_ <= 0) throw DomainError("log of non-positive rational");
  return std::log(static_cast<double>(num_)) - std::log(static_cast<double>(den_));
}

Rational Rational::inverse() const {
  if (num_ == 0) throw DomainError("inverse of zero");
  return make_reduced(den_, num_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-Int128(num_));
  r.den_ = den_;
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  return make_reduced(Int128(a.num_) * b.den_ + Int128(b.num_) * a.den_,
                      Int128(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make_reduced(Int128(a.num_) * b.den_ - Int128(b.num_) * a.den_,
                      Int128(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(Int128(a.num_) * b.num_, Int128(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw DomainError("division by zero rational");
  return make_reduced(Int128(a.num_) * b.den_, Int128(a.den_) * b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
  return Int128(a.num_) * b.den_ < Int128(b.num_) * a.den_;
}

Rational pow(const Rational& base, std::int64_t exponent) {
  if (exponent == 0) return Rational(1);
  Rational b = exponent < 0 ? base.inverse() : base;
  std::uint64_t e = exponent < 0 ? static_cast<std::uint64_t>(-(exponent + 1)) + 1
                                 : static_cast<std::uint64_t>(exponent);
  Rational acc(1);
  while (e > 0) {
    if (e & 1) acc = acc * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return acc;
}

Rational parse_rational(std::string_view text) {
  std::size_t i = 0;
  auto fail = [&]() -> void { throw DomainError("malformed rational literal: '" + std::string(text) + "'"); };
  if (text.empty()) fail();

  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }

  auto read_digits = [&](Int128& out) {
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) fail();
    std::size_t count = 0;
    out = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      out = out * 10 + (text[i] - '0');
      if (out > Int128(std::numeric_limits<std::int64_t>::max()) * 1000000) fail();
      ++i;
      ++count;
    }
    return count;
  };

  Int128 num = 0;
  read_digits(num);
  Int128 den = 1;

  if (i < text.size() && text[i] == '/') {
    ++i;
    read_digits(den);
    if (i != text.size()) fail();
    if (negative) num = -num;
    return make_reduced(num, den);
  }

  if (i < text.size() && text[i] == '.') {
    ++i;
    Int128 frac = 0;
    std::size_t places = read_digits(frac);
    for (std::size_t k = 0; k < places; ++k) {
      num *= 10;
      den *= 10;
      if (den > Int128(std::numeric_limits<std::int64_t>::max()) * 1000) fail();
    }
    num += frac;
  }

  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      exp_neg = text[i] == '-';
      ++i;
    }
    Int128 exp = 0;
    read_digits(exp);
    if (exp > 30) fail();
    for (Int128 k = 0; k < exp; ++k) {
      if (exp_neg) {
        den *= 10;
      } else {
        num *= 10;
      }
      if (den > Int128(std::numeric_limits<std::int64_t>::max()) * 1000 ||
          abs128(num) > Int128(std::numeric_limits<std::int64_t>::max()) * 1000) {
        fail();
      }
    }
  }

  if (i != text.size()) fail();
  if (negative) num = -num;
  return make_reduced(num, den);
}

std::string to_string(const Rational& r) {
  if (r.den() == 1) return std::to_string(r.num());
  return std::to_string(r.num()) + "/" + std::to_string(r.den());
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << to_string(r); }

}  // namespace evsys
