#pragma once

#include <stdexcept>
#include <string>

namespace catstress {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical self-consistency check failed (e.g. a quantity that must be
/// real came out with a large imaginary part).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace catstress
