#include "mog/error.hpp"

namespace mog {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnknownUnit: return "UnknownUnit";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kCorruptRecord: return "CorruptRecord";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kTransportFailure: return "TransportFailure";
    case ErrorCode::kMissingVariable: return "MissingVariable";
    case ErrorCode::kMockScriptMiss: return "MockScriptMiss";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kSearchFailure: return "SearchFailure";
    case ErrorCode::kFetchFailure: return "FetchFailure";
    case ErrorCode::kParseFailure: return "ParseFailure";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kPrecondition: return "PreconditionViolation";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

Error Error::with_context(std::string_view context) const {
  // Strip our own "<Code>: " prefix so it isn't repeated.
  std::string msg = what();
  const std::string prefix = std::string(to_string(code_)) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
  return Error(code_, std::string(context) + ": " + msg);
}

}  // namespace mog
