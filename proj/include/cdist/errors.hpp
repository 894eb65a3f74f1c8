#pragma once

#include <stdexcept>
#include <string>

namespace cdist {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters for a distribution, model, or combiner spec.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Argument outside the support or domain of the object queried.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Probability or level outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Operation not available for this object (e.g. mode without a density).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Too few observations or draws to carry out the operation.
class InsufficientSampleError : public Error {
 public:
  using Error::Error;
};

// Sample or model degenerate (zero variance, empty feasible set, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Work limit exceeded; the message names a cheaper alternative when one exists.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Constraint set empty for the supplied latent variables.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

// Convergence or normalization failure in a numeric routine.
class NumericError : public Error {
 public:
  using Error::Error;
};

// File or parse problem on an external input.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdist
