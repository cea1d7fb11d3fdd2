#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mog {

enum class ErrorCode {
  kEmptyText,
  kDimensionMismatch,
  kUnknownUnit,
  kIoFailure,
  kCorruptRecord,
  kTimeout,
  kTransportFailure,
  kMissingVariable,
  kMockScriptMiss,
  kEmptyInput,
  kSearchFailure,
  kFetchFailure,
  kParseFailure,
  kInsufficientData,
  kKTooLarge,
  kEmptyReference,
  kPrecondition,
  kInvalidConfig,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above so
// callers (and tests) can branch on the kind rather than on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

  // Same error with `context` prepended to the message.
  Error with_context(std::string_view context) const;

 private:
  ErrorCode code_;
};

}  // namespace mog
