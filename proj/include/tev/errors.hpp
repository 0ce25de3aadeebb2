#pragma once

#include <stdexcept>
#include <string>

namespace tev {

// Every failure raised by the library derives from Error, so callers can
// catch one type at the boundary (the CLI maps subclasses to exit codes).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed profile files, non-positive eta, bad flags.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class DerivativeUnavailable : public Error {
 public:
  using Error::Error;
};

class MassOutOfRange : public Error {
 public:
  using Error::Error;
};

class StepUnderflow : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class ContourTooClose : public Error {
 public:
  using Error::Error;
};

class NewtonStall : public Error {
 public:
  using Error::Error;
};

// The characteristic function vanishes identically (eta == 1), so zeros are
// not isolated and the argument principle is meaningless.
class DegenerateCharacteristic : public Error {
 public:
  using Error::Error;
};

class IterationDiverged : public Error {
 public:
  using Error::Error;
};

class CaseMismatch : public Error {
 public:
  using Error::Error;
};

class RegimeError : public Error {
 public:
  using Error::Error;
};

}  // namespace tev
