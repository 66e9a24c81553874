#pragma once

#include <stdexcept>
#include <string>

namespace evsys {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched vector/matrix dimensions between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A rate that is not a positive real.
class PhysicalityError : public Error {
 public:
  using Error::Error;
};

/// An event whose two monomials coincide, or a duplicate event.
class InvalidEventError : public Error {
 public:
  using Error::Error;
};

/// Input outside an operation's domain (negative concentration, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation requires a detailed-balanced system and the input is not one.
class NaturalityError : public Error {
 public:
  using Error::Error;
};

/// Operation requires a certified-atomic system.
class AtomicityError : public Error {
 public:
  using Error::Error;
};

/// A graph-search budget ran out before the result was complete.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: overflow in exact arithmetic, solver divergence, ...
class NumericError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", col " + std::to_string(column) +
              ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace evsys
