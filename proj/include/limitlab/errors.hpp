#pragma once

#include <stdexcept>
#include <string>

namespace limitlab {

enum class ErrorCode {
  InvalidArgument,
  NotSymmetricTraceless,
  NonUnitDirector,
  DegenerateBulk,
  NotInRange,
  GridMismatch,
  BadEpsilon,
  DegenerateGamma,
  NonUnitField,
  NotCritical,
  CflViolation,
  StiffnessViolation,
  StateBlowup,
  InsufficientPoints,
  NonPositiveError,
  CertificateRefused,
  InvalidConfig,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Centralised numerical tolerances.
struct Tolerances {
  double constructor = 1e-12;        // unit-norm / symmetric-traceless checks on construction
  double arithmetic = 1e-13;         // identities of the tensor algebra
  double hn_domain_relative = 1e-8;  // relative in-plane content accepted by hn_inverse
  double degenerate_pole = 1e-12;    // denominators treated as zero
};

inline constexpr Tolerances kTolerances{};

}  // namespace limitlab
