#pragma once

#include <stdexcept>
#include <string>

namespace icecluster {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Domain errors: invalid input, violated preconditions, failed algebraic
/// checks. The CLI maps these to exit code 2.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A size or depth guard was exceeded. The CLI maps these to exit code 3.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// A Laurent division left a nonzero remainder. Along mutation paths this
/// can only be a bug.
class InexactDivision : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace icecluster
