#pragma once

#include <stdexcept>
#include <string>

namespace matword {

// Base for every error raised by the library. Callers that only care about
// "the computation could not honour its contract" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes or arities do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An input violates a numerical precondition (unitarity, normality,
// commutation, hermiticity) by more than the allowed tolerance.
class ToleranceError : public Error {
 public:
  using Error::Error;
};

// Eigenvalue clustering is ambiguous at the requested tolerance.
class ClusteringError : public Error {
 public:
  using Error::Error;
};

// The requested object does not exist for this input (branch cut hit,
// spectral gap too small, matching too far, undefined ratio).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace matword
