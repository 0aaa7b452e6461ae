#include "catmap/error.hpp"

namespace catmap {

std::string_view kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DetNotOne: return "DetNotOne";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::ParityViolation: return "ParityViolation";
    case ErrorKind::BadPrime: return "BadPrime";
    case ErrorKind::Ramified: return "Ramified";
    case ErrorKind::NotSplit: return "NotSplit";
    case ErrorKind::TrivialCharacter: return "TrivialCharacter";
    case ErrorKind::NotRealValued: return "NotRealValued";
    case ErrorKind::ThresholdTooSmall: return "ThresholdTooSmall";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NoIntertwiner: return "NoIntertwiner";
    case ErrorKind::NonUnique: return "NonUnique";
    case ErrorKind::DegeneracyUnresolved: return "DegeneracyUnresolved";
    case ErrorKind::RepresentativeMismatch: return "RepresentativeMismatch";
    case ErrorKind::IdentityViolation: return "IdentityViolation";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NoIntertwiner:
    case ErrorKind::NonUnique:
    case ErrorKind::DegeneracyUnresolved:
    case ErrorKind::RepresentativeMismatch:
    case ErrorKind::IdentityViolation:
      return ErrorCategory::Invariant;
    case ErrorKind::Io:
      return ErrorCategory::Io;
    default:
      return ErrorCategory::Validation;
  }
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind) {}

}  // namespace catmap
