#ifndef UTPM_ERRORS_HPP
#define UTPM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace utpm {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible (rows/cols mismatch, non-square where
/// square is required, inner dimensions disagree).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Operands carry different coefficient counts. Degree conversion is
/// explicit via truncated()/extended(); no silent broadcasting.
class DegreeError : public Error {
 public:
  using Error::Error;
};

/// Convolution window [lo, hi) is empty or exceeds the product degree.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// The degree-0 coefficient is singular or too close to singular to invert.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// The degree-0 matrix does not have full column rank (QR diagonal below
/// threshold).
class RankDeficientError : public SingularMatrixError {
 public:
  using SingularMatrixError::SingularMatrixError;
};

/// Degree-0 eigenvalues are closer than the separation guard allows; the
/// eigendecomposition derivative formulas divide by eigenvalue gaps.
class DegenerateEigenvalues : public Error {
 public:
  using Error::Error;
};

/// A symmetric matrix was required but the input is not symmetric.
class AsymmetricInputError : public Error {
 public:
  using Error::Error;
};

/// Recording, forward or reverse sweep misuse (unknown predecessor, forward
/// not run, seed mismatch, non-scalar dependent, ...).
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Malformed UTPM-TXT input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace utpm

#endif  // UTPM_ERRORS_HPP
