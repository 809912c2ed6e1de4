#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simplexcert {

// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: non-finite entries, shape mismatches, out-of-range
// parameters. Signals a caller bug, never a failed certification.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// The requested bound could not be certified at the working tolerance.
// This is a "no witness found" outcome, not a proof of the negation: a
// degenerate-looking input may simply sit below the tolerance.
class CannotCertifyError : public Error {
 public:
  using Error::Error;
};

// A configured resource cap would be exceeded. Carries the budget the
// operation would have needed.
class ResourceLimitError : public Error {
 public:
  ResourceLimitError(const std::string& what, std::size_t required_budget)
      : Error(what), required(required_budget) {}

  std::size_t required;
};

}  // namespace simplexcert
