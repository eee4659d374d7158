#include "pidigits/error.hpp"

#include <fmt/format.h>

namespace pidigits {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kResourceLimit: return "resource limit";
    case ErrorCode::kPrecision: return "precision failure";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kBaseMismatch: return "base mismatch";
    case ErrorCode::kMalformedHeader: return "malformed header";
    case ErrorCode::kInvalidDigit: return "invalid digit";
    case ErrorCode::kTruncated: return "truncated input";
    case ErrorCode::kIo: return "I/O error";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kOverflow: return "overflow";
    case ErrorCode::kEmpty: return "empty input";
    case ErrorCode::kDigestMismatch: return "digest mismatch";
    case ErrorCode::kCorruptCheckpoint: return "corrupt checkpoint";
    case ErrorCode::kRange: return "out of range";
  }
  return "unknown error";
}

InvalidDigitError::InvalidDigitError(std::uint64_t offset, char byte)
    : Error(ErrorCode::kInvalidDigit,
            fmt::format("invalid digit 0x{:02x} at offset {}",
                        static_cast<unsigned char>(byte), offset)),
      offset_(offset) {}

}  // namespace pidigits
