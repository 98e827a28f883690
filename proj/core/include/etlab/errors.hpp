#pragma once

#include <stdexcept>
#include <string>

namespace etlab {

/// Base class for every error the engine raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An expression was evaluated outside its domain (log of a non-positive
/// argument, sqrt of a negative one, division by zero).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A derivative was requested beyond the truncation order of a jet.
class OrderExhausted : public Error {
 public:
  OrderExhausted(const std::string& what, int required_order)
      : Error(what), required_order_(required_order) {}
  int required_order() const noexcept { return required_order_; }

 private:
  int required_order_;
};

/// Operands whose variable count, order or tensor shape disagree.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The metric is singular or not positive-definite at a point.
class SingularMetric : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

/// |f| fell below the potential guard at a sample point.
class NearZeroPotential : public Error {
 public:
  using Error::Error;
};

/// |grad f| fell below the critical-point guard.
class CriticalPoint : public Error {
 public:
  using Error::Error;
};

}  // namespace etlab
