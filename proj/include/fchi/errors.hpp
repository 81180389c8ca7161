#pragma once

#include <stdexcept>
#include <string>

namespace fchi {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or a violated precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside the natural parameter space of its family.
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// A quantity is mathematically infinite or an integral/series does not
/// converge (e.g. a truncated exponential with i*theta_q - (i-1)*theta_p <= 0).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A finite quantity could not be represented, and its sign is ambiguous.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace fchi
