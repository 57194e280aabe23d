#pragma once

#include <stdexcept>
#include <string>

namespace emoharness {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed files, config invariant violations, contract breaches
// by the caller. The CLI maps these to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Failures talking to a model provider or persisting results. CLI exit code 2.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace emoharness
