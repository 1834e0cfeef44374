#pragma once

#include <stdexcept>
#include <string>

namespace sigmaeq {

// Base of every error thrown by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument's mathematical domain failed
// (d does not divide q, gcd(w, q) > 1, X <= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A query reached past the range a table was built for.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// The operation is defined, but not for this kind of modulus.
class UnsupportedModulusError : public Error {
 public:
  using Error::Error;
};

// A configured memory or size cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace sigmaeq
