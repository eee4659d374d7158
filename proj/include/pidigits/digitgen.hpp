#pragma once

#include <cstdint>

#include "pidigits/digit_block.hpp"

namespace pidigits {

struct GenOptions {
  /// Requests above this many digits fail with ErrorCode::kResourceLimit.
  std::uint64_t max_digits = 100'000'000;
  /// Extra digits carried through the evaluation and discarded afterwards.
  unsigned guard_digits = 10;
  /// Runs longer than this regenerate the tail with doubled guard digits and
  /// fail with kPrecision if the two disagree.
  std::uint64_t self_check_above = 1'000'000;
};

/// First `n_digits` fractional decimal digits of pi (the leading 3 is not
/// included). Chudnovsky series, binary splitting.
DigitBlock gen_pi_decimal(std::uint64_t n_digits, const GenOptions& options = {});

/// First `n_digits` fractional hexadecimal digits of pi, from the same
/// Chudnovsky evaluation carried out at binary precision.
DigitBlock gen_pi_hex(std::uint64_t n_digits, const GenOptions& options = {});

/// Largest supported value of position + count for bbp_hex_at.
inline constexpr std::uint64_t kBbpMaxPosition = 1'000'000'000'000ULL;
inline constexpr unsigned kBbpMaxCount = 16;

/// `count` hex digits of pi starting at 0-based fractional position
/// `position`, by BBP digit extraction. Does not generate preceding digits.
/// Throws kPrecision if the accumulated rounding bound leaves any returned
/// digit uncertain.
DigitBlock bbp_hex_at(std::uint64_t position, unsigned count);

/// Number of Chudnovsky terms needed for `decimal_digits` of precision,
/// including two guard terms.
std::uint64_t chudnovsky_terms(double decimal_digits);

}  // namespace pidigits
