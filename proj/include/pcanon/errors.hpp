#pragma once

#include <stdexcept>
#include <string>

namespace pcanon {

// Base of every error raised by the library. The CLI maps the subclasses
// onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input or a violated precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

// A configured enumeration or size cap was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A computed quantity contradicts a theorem the code relies on.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcanon
