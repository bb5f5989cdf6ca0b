#pragma once

#include <stdexcept>
#include <string>

namespace rwsurf {

/// Base class for every failure raised by the geometry kernels.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or time value fell outside the domain where it is defined.
class DomainError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// A vector that must be tangent to the fiber model is not.
class TangencyError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// The induced metric is (numerically) degenerate.
class DegenerateError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// No adapted frame exists at the point (for instance T = 0).
class FrameError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// The Jacobian of an immersion lost rank.
class ImmersionError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Frame integration broke down during re-orthonormalization.
class IntegrationError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// A closed-form predictor hit a vanishing denominator.
class SingularPointError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rwsurf
