#pragma once

#include <stdexcept>
#include <string>

namespace twinsieve {

// Precondition on an argument's domain failed (composite p_j, n = 0, x <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// N(x) requested at a half-integer.
class AmbiguityError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Evaluation exactly at a pole (zeta at s = 1, kernel at s = 0).
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A factor of an Euler product vanishes (p^s = 2).
class SingularFactorError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A theorem-backed property failed on computed data.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The requested object would exceed a materialization or enumeration cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twinsieve
