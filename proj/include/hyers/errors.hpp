#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyers {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands belong to different algebras.
class AlgebraMismatch : public Error {
 public:
  using Error::Error;
};

/// A Ψ series whose ratio test fails for the requested direction.
class DivergentSeries : public Error {
 public:
  using Error::Error;
};

/// A tabulated control was queried outside its grid with extrapolation off.
class OutOfTable : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration text; carries the 1-based line and the field name.
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, std::string field, const std::string& msg)
      : Error("line " + std::to_string(line) + " [" + field + "]: " + msg),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

}  // namespace hyers
