#pragma once

#include <stdexcept>
#include <string>

namespace vtg {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured size cap (materialization, search budget, ...) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A check that is a theorem on finite data failed. This always indicates a
// bug in the library or in its inputs' claimed structure, never a legitimate
// outcome.
class FalsificationError : public Error {
 public:
  using Error::Error;
};

// Malformed input or a violated precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace vtg
