#pragma once

#include <stdexcept>
#include <string>

namespace cusplab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point or field dimensions do not match the domain.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested outside the set where an object is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid numerical parameter (order, exponent, radius, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A field produced a non-finite value at a quadrature node or probe.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// A weight that should be integrable integrated to zero or non-finite.
class WeightError : public Error {
 public:
  using Error::Error;
};

/// A finite-difference stencil left the domain.
class StencilError : public Error {
 public:
  using Error::Error;
};

/// Kernel queried at coincident points.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition (support, mean value, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotMeanZero : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class BetaOutOfRange : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class EtaTooSmall : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Internal consistency failure: an admissible beta produced a non-A_p weight.
class ApViolation : public Error {
 public:
  using Error::Error;
};

class DegenerateConstant : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Mesh or finite element assembly failure (singular operator, bad mesh).
class AssemblyError : public Error {
 public:
  using Error::Error;
};

}  // namespace cusplab
