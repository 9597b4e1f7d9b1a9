#pragma once

#include <stdexcept>
#include <string>

namespace ets {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A grid, filter, or pulse specification violates its invariants.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Run configuration is malformed or internally inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operand sizes do not match the assembled operator.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the domain of a map or of the simulated volume.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, failed convergence, or a singular evaluation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The propagator could not satisfy its error criterion within max_k,
/// or the stiffness filter removed states that reach the window edge.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

}  // namespace ets
