#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flatscan {

// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbolError : public Error {
 public:
  explicit UnknownSymbolError(const std::string& name)
      : Error("unknown symbol '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DivisionByZeroError : public Error {
 public:
  using Error::Error;
};

// Raised when a denominator vanishes at a sample point.
class PoleError : public Error {
 public:
  explicit PoleError(const std::string& denominator)
      : Error("pole: denominator '" + denominator + "' vanishes at the sample point"),
        denominator_(denominator) {}
  const std::string& denominator() const noexcept { return denominator_; }

 private:
  std::string denominator_;
};

class ChartMismatchError : public Error {
 public:
  using Error::Error;
};

class NotIntegrableError : public Error {
 public:
  using Error::Error;
};

class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

class InvalidIndicesError : public Error {
 public:
  using Error::Error;
};

class UnboundedRelativeDegree : public Error {
 public:
  using Error::Error;
};

class NonInvertibleTransform : public Error {
 public:
  using Error::Error;
};

class DependentDifferentials : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Internal inconsistency (for example numeric and exact rank disagree).
class InternalDiagnostic : public Error {
 public:
  using Error::Error;
};

}  // namespace flatscan
