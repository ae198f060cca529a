#pragma once

#include <stdexcept>
#include <string>

namespace wavefront {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-supplied parameter or configuration value.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: step-size underflow, NaN, non-convergence, singularity.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Two independent computations of the same quantity disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace wavefront
