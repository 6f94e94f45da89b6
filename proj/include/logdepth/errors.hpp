#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace logdepth {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An expansion or enumeration would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// An order-dependent check was requested over an unordered field.
class FieldUnordered : public Error {
 public:
  using Error::Error;
};

/// Two formulas use different commutativity modes or fields.
class ModeMismatch : public Error {
 public:
  using Error::Error;
};

/// Text could not be parsed; carries a 1-based line/column.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// The tree violates a structural rule of the formula model.
class WellFormednessError : public Error {
 public:
  using Error::Error;
};

class NotSkew : public Error {
 public:
  using Error::Error;
};

class DuplicateLeafVariable : public Error {
 public:
  using Error::Error;
};

/// Formula too small for a size-splitting step (caller should use the base case).
class TooSmall : public Error {
 public:
  using Error::Error;
};

class NotSemanticallyHomogeneous : public Error {
 public:
  using Error::Error;
};

class UniverseTooLarge : public Error {
 public:
  using Error::Error;
};

class NotComputingH : public Error {
 public:
  using Error::Error;
};

class ParamOutOfRange : public Error {
 public:
  using Error::Error;
};

class InfeasibleShape : public Error {
 public:
  using Error::Error;
};

/// A pass produced output outside its proven size/depth envelope.
/// Always a bug, never an input problem.
class BoundViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace logdepth
