#include "pidigits/digit_block.hpp"

#include <fmt/format.h>

#include "pidigits/error.hpp"

namespace pidigits {

void check_base(int base) {
  if (base < DigitBlock::kMinBase || base > DigitBlock::kMaxBase) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("unsupported base {}", base));
  }
}

char digit_char(Digit d) { return "0123456789ABCDEF"[d & 0x0F]; }

int digit_value(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

DigitBlock::DigitBlock(int base) : base_(base) { check_base(base); }

DigitBlock::DigitBlock(int base, std::vector<Digit> digits)
    : base_(base), digits_(std::move(digits)) {
  check_base(base);
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (digits_[i] >= base_) {
      throw Error(ErrorCode::kInvalidDigit,
                  fmt::format("digit {} at index {} is not valid in base {}",
                              static_cast<int>(digits_[i]), i, base_));
    }
  }
}

DigitBlock DigitBlock::from_chars(int base, std::string_view text) {
  std::vector<Digit> digits;
  digits.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const int v = digit_value(text[i]);
    if (v < 0 || v >= base) throw InvalidDigitError(i, text[i]);
    digits.push_back(static_cast<Digit>(v));
  }
  return DigitBlock(base, std::move(digits));
}

void DigitBlock::append(std::span<const Digit> more) {
  for (Digit d : more) {
    if (d >= base_) {
      throw Error(ErrorCode::kInvalidDigit,
                  fmt::format("digit {} is not valid in base {}", static_cast<int>(d), base_));
    }
  }
  digits_.insert(digits_.end(), more.begin(), more.end());
}

std::string DigitBlock::to_string() const {
  std::string out(digits_.size(), '0');
  for (std::size_t i = 0; i < digits_.size(); ++i) out[i] = digit_char(digits_[i]);
  return out;
}

}  // namespace pidigits
