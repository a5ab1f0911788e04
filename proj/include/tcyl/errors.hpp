#pragma once

#include <stdexcept>
#include <string>

namespace tcyl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical or numerical parameter is outside its admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of a function (e.g. the analyticity strip).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a coincident point of a singular kernel.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Array shapes do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Too few (or degenerate) samples for a statistical estimate.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Non-finite action or otherwise broken Monte Carlo state.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Operators that should commute do not, or live on different bases.
class BasisError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration, manifest or data file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace tcyl
