#include "limitlab/errors.hpp"

namespace limitlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotSymmetricTraceless: return "NotSymmetricTraceless";
    case ErrorCode::NonUnitDirector: return "NonUnitDirector";
    case ErrorCode::DegenerateBulk: return "DegenerateBulk";
    case ErrorCode::NotInRange: return "NotInRange";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::BadEpsilon: return "BadEpsilon";
    case ErrorCode::DegenerateGamma: return "DegenerateGamma";
    case ErrorCode::NonUnitField: return "NonUnitField";
    case ErrorCode::NotCritical: return "NotCritical";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::StiffnessViolation: return "StiffnessViolation";
    case ErrorCode::StateBlowup: return "StateBlowup";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::NonPositiveError: return "NonPositiveError";
    case ErrorCode::CertificateRefused: return "CertificateRefused";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace limitlab
