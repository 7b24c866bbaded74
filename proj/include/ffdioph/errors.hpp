#pragma once

#include <stdexcept>
#include <string>

namespace ffdioph {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands built over different FieldSpecs.
class FieldMismatchError : public Error {
 public:
  FieldMismatchError() : Error("operands belong to different fields") {}
};

class DivisionByZeroError : public Error {
 public:
  explicit DivisionByZeroError(const std::string& what = "division by zero") : Error(what) {}
};

// A requested coefficient lies outside the window a truncated series can vouch for.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the operation's domain (bad dimension, negative radius, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Exhaustive computation would exceed the configured desk-scale guard.
class ScaleError : public Error {
 public:
  using Error::Error;
};

}  // namespace ffdioph
