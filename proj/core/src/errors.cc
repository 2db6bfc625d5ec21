#include "dsim/errors.h"

namespace dsim {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kDuplicateCategory: return "DuplicateCategory";
    case ErrorCode::kUnknownCategory: return "UnknownCategory";
    case ErrorCode::kInfeasibleProblem: return "InfeasibleProblem";
    case ErrorCode::kInvalidCost: return "InvalidCost";
    case ErrorCode::kDegeneratePlan: return "DegeneratePlan";
    case ErrorCode::kZeroCount: return "ZeroCount";
    case ErrorCode::kMissingImageIds: return "MissingImageIds";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kBadVersion: return "BadVersion";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : Error(code, message, std::nullopt, std::nullopt) {}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::uint64_t> line,
             std::optional<std::uint64_t> byte_offset)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code),
      message_(message),
      line_(line),
      byte_offset_(byte_offset) {}

Error ParseErrorAtLine(const std::string& source, std::uint64_t line,
                       const std::string& what) {
  return Error(ErrorCode::kParseError,
               source + ":" + std::to_string(line) + ": " + what, line,
               std::nullopt);
}

Error ParseErrorAtOffset(const std::string& source, std::uint64_t offset,
                         const std::string& what) {
  return Error(ErrorCode::kParseError,
               source + " @ byte " + std::to_string(offset) + ": " + what,
               std::nullopt, offset);
}

}  // namespace dsim
