#pragma once

#include <stdexcept>
#include <string>

namespace curvkit {

/// Malformed input: wrong lengths, out-of-range orders or indices.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced or required a numerically invalid quantity
/// (non-positive-definite metric, non-finite integrand).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The immersion Jacobian lost rank at the requested point.
class DegenerateImmersionError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Operation only defined for hypersurfaces was called in higher codimension.
class UnsupportedCodimensionError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// A parameter point or family member fell outside its admissible domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A finite-difference stencil left a non-periodic chart domain.
class BoundaryError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Too many quadrature nodes were rejected.
class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The Rayleigh estimator had nothing to work with.
class EstimatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A theorem was requested outside its hypotheses.
class InadmissibleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace curvkit
