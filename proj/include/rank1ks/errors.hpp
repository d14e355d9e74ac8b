#pragma once

#include <stdexcept>
#include <string>

namespace rank1ks {

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

/// Point-level operation requested on a space where it is not defined
/// (the nilpotent group law is only implemented for m2 = 0).
class UnsupportedSpace : public Error {
 public:
  using Error::Error;
};

/// A ball or sampling region does not fit inside its container.
class ContainmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace rank1ks
