#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stairlift {

enum class ErrorCode {
  kUnknownLabel,
  kNonFiniteInput,
  kMissingColumn,
  kMalformedRow,
  kNonMonotonicTime,
  kTooFewSamples,
  kInvalidParams,
  kEmptyDataset,
  kDegenerateData,
  kArityMismatch,
  kInsufficientData,
  kLengthMismatch,
  kEmpty,
  kSingleParticipant,
  kInvalidConfig,
  kLeakage,
  kIo,
  kFormat,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as this exception; `code()` lets
// callers (and tests) distinguish the cause without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stairlift
