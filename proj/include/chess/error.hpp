#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chess {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range integer parameter (k, list lengths, grid sizes).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data: non-Hermitian matrices, bad files, non-finite samples.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A spectrum, matrix or field point left the Gamma_k cone.
class ConeViolation : public Error {
 public:
  /// `index` is the first failing S_j index, the offending argument, or the
  /// worst grid point, depending on the raising operation.
  ConeViolation(const std::string& what, std::size_t index, double value)
      : Error(what), index_(index), value_(value) {}

  std::size_t index() const noexcept { return index_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t index_;
  double value_;
};

/// Right-hand side does not have unit mean, or Poisson data is not mean-zero.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

/// File missing, unreadable, or inconsistent with its sidecar.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Right-hand side f is not strictly positive.
class PositivityError : public Error {
 public:
  using Error::Error;
};

}  // namespace chess
