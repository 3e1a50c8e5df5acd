#pragma once

#include <stdexcept>
#include <string>

namespace coderoute {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad files, dimension mismatches, structurally broken tapes.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that a component cannot handle (fan-in caps, register
/// caps, tapes that are not one-round realizable, ...).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A self-check inside the library failed. Always a bug, never bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace coderoute
