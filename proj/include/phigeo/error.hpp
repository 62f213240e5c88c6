#pragma once

#include <stdexcept>
#include <string>

namespace phigeo {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Result would lie outside the representable range (e.g. exp_phi above the
/// supremum of log_phi).
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A callable returned NaN or could not be evaluated.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A probability vector touches the boundary of the simplex where an interior
/// point is required.
class BoundaryError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DivergentIntegral : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1 + nu * log(x) vanishes inside the working range of a Tsallis-Souza dual.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Operation requested on a degenerate (c,d) parameter branch it does not cover.
class BranchError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Moment targets not strictly inside the convex hull of configurations.
class InfeasibleTarget : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A generator failed construction-time validation.
class ValidationError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace phigeo
