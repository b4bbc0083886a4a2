#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arrowc {

enum class ErrorCode {
  // categories
  kCycle,
  kNoInitialObject,
  kLcaViolation,
  kUnknownKind,
  kUnknownObject,
  kNotPrime,
  kResultNotIndexing,
  // spaces
  kWeightSumNotOne,
  kNegativeWeight,
  kDuplicateAtom,
  kBadParam,
  kNotSurjective,
  kUnknownAtom,
  // diagrams
  kCommutativity,
  kMapError,
  kNotMonotone,
  kShapeMismatch,
  kNotClosed,
  kTooLarge,
  kNotIso,
  // distances
  kCapExceeded,
  kMismatchedU,
  // contraction / expansion
  kNotAdmissible,
  kNotHomogeneous,
  kNotFanGenerated,
  kRangeError,
  kNotReduced,
  kVerificationFailed,
  // io / cli
  kParse,
  kIo,
  kConfig,
};

std::string_view error_code_name(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace arrowc
