#pragma once

#include <stdexcept>
#include <string>

namespace miso {

/// Matrix passed where a Hermitian one is required.
class NonHermitianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linear system has no reliable solution (pivot below threshold).
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Right-hand side of a generalized eigenproblem is not positive definite.
/// Carries the offending smallest eigenvalue.
class SingularGramError : public std::runtime_error {
 public:
  SingularGramError(const std::string& what, double smallest)
      : std::runtime_error(what), smallest_eigenvalue(smallest) {}
  double smallest_eigenvalue;
};

/// Cayley transform requested at a spectral pole (A - I or T - I singular).
class CayleyPoleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature of an integral that cannot converge for the given parameters.
class DivergentIntegralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Declared operator class does not match the computed one.
class ClassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Local quantity requested at the excluded boundary point 1.
class PoleAtOneError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Kernel evaluation requested on or outside the unit circle.
class BoundaryEvaluationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace miso
