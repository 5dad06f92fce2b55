#pragma once

#include <stdexcept>
#include <string>

namespace wlp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Vector or set-function arity does not match what the operation expects.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// A lattice value lies outside [bottom, top], or a parameter is invalid.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A joint model is malformed, or cannot serve the requested operation.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Input data (CSV, JSON, grid specs) could not be read.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A computation route was requested whose preconditions do not hold.
class RouteError : public Error {
 public:
  using Error::Error;
};

}  // namespace wlp
