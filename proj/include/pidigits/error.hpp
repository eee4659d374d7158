#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pidigits {

enum class ErrorCode {
  kInvalidArgument,
  kResourceLimit,
  kPrecision,
  kDomain,
  kBaseMismatch,
  kMalformedHeader,
  kInvalidDigit,
  kTruncated,
  kIo,
  kShapeMismatch,
  kOverflow,
  kEmpty,
  kDigestMismatch,
  kCorruptCheckpoint,
  kRange,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised while parsing an ASCII digit file; `offset` is the byte offset of
/// the offending character from the start of the file.
class InvalidDigitError : public Error {
 public:
  InvalidDigitError(std::uint64_t offset, char byte);

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace pidigits
