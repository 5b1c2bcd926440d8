#pragma once

#include <stdexcept>
#include <string>

namespace pmlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown or duplicated subsystem label.
class LabelError : public Error {
 public:
  using Error::Error;
};

/// Input violates a structural precondition (Hermiticity, positivity, TP).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Scalar parameter outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input.
class FormatError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimensionError : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be real came back with a non-negligible imaginary part.
class NumericalIntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace pmlab
