#pragma once

#include <stdexcept>
#include <string>

namespace ftcollapse {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSystemError : public Error {
 public:
  using Error::Error;
};

class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (t >= T, negative tau, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Bad run parameters. `field()` names the offending config entry when known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message, std::string field = {})
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class UnsupportedInputError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ftcollapse
