#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace catmap {

// Every failure the library signals is one of these kinds. The CLI maps the
// category of the kind onto its exit code.
enum class ErrorKind {
  DetNotOne,
  NotHyperbolic,
  ParityViolation,
  BadPrime,
  Ramified,
  NotSplit,
  TrivialCharacter,
  NotRealValued,
  ThresholdTooSmall,
  EmptySample,
  InvalidArgument,
  NoIntertwiner,
  NonUnique,
  DegeneracyUnresolved,
  RepresentativeMismatch,
  IdentityViolation,
  Io,
};

enum class ErrorCategory { Validation, Invariant, Io };

std::string_view kind_name(ErrorKind kind) noexcept;
ErrorCategory category_of(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace catmap
