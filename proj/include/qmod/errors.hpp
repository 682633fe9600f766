#pragma once

#include <stdexcept>
#include <string>

namespace qmod {

// Base of all library errors. The three subfamilies map onto CLI exit codes:
// UsageError -> 2, PrecisionError -> 3, CheckFailure -> 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : Error {
  using Error::Error;
};
struct PrecisionError : Error {
  using Error::Error;
};
struct CheckFailure : Error {
  using Error::Error;
};

// series_core
struct ModulusMismatch : UsageError {
  using UsageError::UsageError;
};
struct BadModulus : UsageError {
  using UsageError::UsageError;
};
struct NonUnitLeading : UsageError {
  using UsageError::UsageError;
};
struct InsufficientPrecision : PrecisionError {
  using PrecisionError::PrecisionError;
};

// form_builders
struct BadOffset : UsageError {
  using UsageError::UsageError;
};
struct BadWeight : UsageError {
  using UsageError::UsageError;
};
// Raised when an exact-integer expansion is requested for a form whose
// normalized coefficients are genuinely rational; a modulus coprime to the
// denominator makes the request well-posed.
struct NonIntegralCoefficients : UsageError {
  using UsageError::UsageError;
};
struct CrossCheckFailed : CheckFailure {
  using CheckFailure::CheckFailure;
};

// operators / theta_cycle
struct PrecisionExhausted : PrecisionError {
  using PrecisionError::PrecisionError;
};
struct PrincipalPartNonzero : UsageError {
  using UsageError::UsageError;
};

// filtration_engine
struct BasisMismatch : CheckFailure {
  using CheckFailure::CheckFailure;
};
struct ZeroInput : UsageError {
  using UsageError::UsageError;
};

// singular_moduli
struct BadDiscriminant : UsageError {
  using UsageError::UsageError;
};
struct RoundingGuard : PrecisionError {
  using PrecisionError::PrecisionError;
};

// congruence_stats
struct StreamTooShort : PrecisionError {
  using PrecisionError::PrecisionError;
};

}  // namespace qmod
