#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace doqual {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument value (K < 2, k out of range, damping outside (0,1), ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input violates a declared schema: unknown tag, duplicate id, value out of range.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A formula was evaluated on counts for which it is undefined (zero words or sentences).
class UndefinedInputError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Non-finite features or dimension mismatches.
class DataError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class BalanceError : public Error {
 public:
  using Error::Error;
};

class FoldError : public Error {
 public:
  using Error::Error;
};

/// A feature group was requested without the fitted resource it needs.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

}  // namespace doqual
