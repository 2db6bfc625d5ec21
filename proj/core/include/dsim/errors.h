#ifndef DSIM_ERRORS_H_
#define DSIM_ERRORS_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dsim {

enum class ErrorCode {
  kEmptyInput,
  kDimensionMismatch,
  kNonFiniteValue,
  kDuplicateCategory,
  kUnknownCategory,
  kInfeasibleProblem,
  kInvalidCost,
  kDegeneratePlan,
  kZeroCount,
  kMissingImageIds,
  kInvalidArgument,
  kParseError,
  kBadMagic,
  kBadVersion,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library. The code identifies the contract that
// was violated; parse failures additionally carry a 1-based line (text
// formats) or a byte offset (binary formats).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  Error(ErrorCode code, const std::string& message,
        std::optional<std::uint64_t> line,
        std::optional<std::uint64_t> byte_offset);

  ErrorCode code() const { return code_; }
  // what() without the leading code name.
  const std::string& message() const { return message_; }
  std::optional<std::uint64_t> line() const { return line_; }
  std::optional<std::uint64_t> byte_offset() const { return byte_offset_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<std::uint64_t> line_;
  std::optional<std::uint64_t> byte_offset_;
};

Error ParseErrorAtLine(const std::string& source, std::uint64_t line,
                       const std::string& what);
Error ParseErrorAtOffset(const std::string& source, std::uint64_t offset,
                         const std::string& what);

}  // namespace dsim

#endif  // DSIM_ERRORS_H_
