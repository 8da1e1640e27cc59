#pragma once

#include <stdexcept>
#include <string>

namespace matconvex {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An eigenvalue (or scalar argument) fell outside a function's domain.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double offending)
      : Error(what), offending_(offending) {}
  double offending_value() const noexcept { return offending_; }

 private:
  double offending_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be inverted is too close to singular.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented invariant (bad representation, bad state, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document. `where` names the offending field or position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string where)
      : Error(what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace matconvex
