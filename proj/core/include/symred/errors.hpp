#pragma once

#include <stdexcept>
#include <string>

namespace symred {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structure constants fail c^k_ij = -c^k_ji.
struct AntisymmetryViolation : Error { using Error::Error; };

/// Structure constants fail the Jacobi identity beyond tolerance.
struct JacobiViolation : Error { using Error::Error; };

/// Builtin algebra name not recognized.
struct UnknownAlgebra : Error { using Error::Error; };

/// Operands sized for different algebras or vector spaces.
struct DimensionMismatch : Error { using Error::Error; };

/// Adjoint matrix is not invertible to the required accuracy.
struct InvalidGroupElement : Error { using Error::Error; };

/// A point carries the wrong space tag for the requested map.
struct WrongSpaceTag : Error { using Error::Error; };

/// A gradient or Hessian oracle produced non-finite values.
struct GradientFailure : Error { using Error::Error; };

/// Fiber Hessian of a Lagrangian is singular.
struct DegenerateLagrangian : Error { using Error::Error; };

/// Newton iteration failed to converge within the iteration budget.
struct NewtonDivergence : Error { using Error::Error; };

/// Integration produced NaN or infinity.
struct NonFiniteState : Error { using Error::Error; };

/// Trajectory metadata does not match the requested operation.
struct MethodMismatch : Error { using Error::Error; };

/// Too few trajectory samples for a finite-difference check.
struct TooFewSamples : Error { using Error::Error; };

/// Mass matrix is singular.
struct SingularMass : Error { using Error::Error; };

/// Requested drift quantity is not present in the trajectory.
struct UnknownQuantity : Error { using Error::Error; };

/// Not enough data points for a convergence fit.
struct InsufficientData : Error { using Error::Error; };

/// Invalid configuration file or command-line flags.
struct ConfigError : Error { using Error::Error; };

/// File could not be read or written.
struct IoError : Error { using Error::Error; };

}  // namespace symred
