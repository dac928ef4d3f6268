#pragma once

#include <stdexcept>
#include <string>

namespace mvop {

/// Invalid model or rule parameters (alpha, beta <= -1, Omega outside (-1, 1], ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation point outside the admissible interval.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Mismatched block orders or coefficient lengths.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input lacks the structure an algorithm relies on (symmetry, tridiagonality, T-commutation).
class StructureError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An iterative method failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mvop
