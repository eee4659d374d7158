#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pidigits {

using Digit = std::uint8_t;

/// A contiguous run of digit values in one base. The unit handed between
/// generators, readers and counters.
class DigitBlock {
 public:
  static constexpr int kMinBase = 2;
  static constexpr int kMaxBase = 16;

  explicit DigitBlock(int base);
  /// Throws Error(kInvalidDigit) if any value is >= base.
  DigitBlock(int base, std::vector<Digit> digits);

  /// Parses characters 0-9, a-f, A-F. No whitespace, no prefix.
  static DigitBlock from_chars(int base, std::string_view text);

  int base() const noexcept { return base_; }
  std::size_t length() const noexcept { return digits_.size(); }
  bool empty() const noexcept { return digits_.empty(); }
  std::span<const Digit> digits() const noexcept { return digits_; }
  Digit operator[](std::size_t i) const { return digits_[i]; }

  void append(std::span<const Digit> more);

  /// Upper-case canonical text.
  std::string to_string() const;

  friend bool operator==(const DigitBlock&, const DigitBlock&) = default;

 private:
  int base_;
  std::vector<Digit> digits_;
};

char digit_char(Digit d);
/// Returns -1 for characters that are not 0-9/a-f/A-F.
int digit_value(char c) noexcept;
void check_base(int base);

}  // namespace pidigits
