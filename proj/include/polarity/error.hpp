#ifndef POLARITY_ERROR_HPP
#define POLARITY_ERROR_HPP

#include <stdexcept>
#include <string>

namespace polarity {

// Base class for all toolkit errors. The CLI maps InputError subtrees to
// exit code 2 and NumericError to exit code 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad inputs: files, formats, arguments, configuration.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class StructureError : public InputError {
 public:
  using InputError::InputError;
};

class FormatError : public InputError {
 public:
  using InputError::InputError;
};

class ArgumentError : public InputError {
 public:
  using InputError::InputError;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

// Operation is valid but the input lacks a required capability
// (e.g. scanning an unparsed corpus).
class CapabilityError : public InputError {
 public:
  using InputError::InputError;
};

class PlanningError : public InputError {
 public:
  using InputError::InputError;
};

// Numerical failures: NaN loss, degenerate statistics.
class NumericError : public Error {
 public:
  using Error::Error;
};

class DegenerateStatError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace polarity

#endif  // POLARITY_ERROR_HPP
