#pragma once

#include <stdexcept>
#include <string>

namespace orbimorse {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid catalog parameters, malformed run configuration, unknown ids.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// A geometric precondition failed (metric not positive definite, point outside
// a chart, non-unitary group element, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// An integrand failed the group-invariance check on sampled orbits.
class IntegrandError : public Error {
 public:
  using Error::Error;
};

// The requested operation is not implemented for this catalog model.
class UnsupportedModelError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace orbimorse
