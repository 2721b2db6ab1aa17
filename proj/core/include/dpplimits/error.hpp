#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpplimits {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (point files, kernel files, configs).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DimensionMismatch : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Invalid experiment configuration; names the line and the field.
class ConfigError : public ParseError {
 public:
  ConfigError(std::size_t line, std::string field, const std::string& what)
      : ParseError(line, field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A numerical construction broke down at a specific index (non-finite value,
/// Gram-Schmidt rank deficiency, zero degree, zero density, ...).
class NumericalError : public Error {
 public:
  NumericalError(std::size_t index, const std::string& what)
      : Error(what + " (index " + std::to_string(index) + ")"), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class RankDeficiency : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The kernel fails the existence condition for DPP(K, mu_n).
class KernelValidationError : public Error {
 public:
  KernelValidationError(double value, const std::string& what)
      : Error(what + " (value " + std::to_string(value) + ")"), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// The requested tuple summation or enumeration exceeds the work budget.
class InfeasibleError : public Error {
 public:
  InfeasibleError(double cost, const std::string& what)
      : Error(what + " (estimated cost " + std::to_string(cost) + ")"), cost_(cost) {}
  double cost() const noexcept { return cost_; }

 private:
  double cost_;
};

}  // namespace dpplimits
