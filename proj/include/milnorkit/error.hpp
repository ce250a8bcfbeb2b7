#pragma once

#include <stdexcept>
#include <string>

namespace milnorkit {

/// Malformed or mismatched input (dimension mismatch, bad shape, non-finite entry).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation was not met.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Every sample was excluded because the map's derivative vanished there.
class DegenerateMapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too few usable samples for an estimate; carries the originating operation.
class InsufficientDataError : public std::runtime_error {
 public:
  InsufficientDataError(std::string operation, const std::string& what)
      : std::runtime_error(operation + ": " + what), operation_(std::move(operation)) {}

  const std::string& operation() const noexcept { return operation_; }

 private:
  std::string operation_;
};

}  // namespace milnorkit
