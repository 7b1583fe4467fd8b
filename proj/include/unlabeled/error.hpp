#pragma once

#include <stdexcept>
#include <string>

namespace unlabeled {

/// Base of every exception thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent shapes between arguments.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition does not hold (bad count, bad range, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf in an input.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// A probability-zero degeneracy actually happened (singular system, zero gap).
class DegenerateInstance : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents; the message carries file/line context.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace unlabeled
