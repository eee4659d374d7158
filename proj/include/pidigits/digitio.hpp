#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "pidigits/digit_block.hpp"

namespace pidigits {

enum class DigitFormat { kAscii, kPacked };

std::string to_string(DigitFormat format);
/// Accepts "ascii" and "packed".
DigitFormat parse_digit_format(std::string_view name);

/// 16-byte header at the start of every packed digit file.
struct PackedHeader {
  static constexpr std::array<char, 4> kMagic{'P', 'I', 'D', 'G'};
  static constexpr std::uint8_t kVersion = 1;
  static constexpr std::size_t kSize = 16;

  std::uint8_t base = 10;
  std::uint64_t digit_count = 0;

  std::array<std::uint8_t, kSize> encode() const;
  /// Throws kMalformedHeader on bad magic, version, base or reserved bytes.
  static PackedHeader decode(std::span<const std::uint8_t> bytes);
};

/// Single-consumer reader over an ASCII or packed digit source.
class DigitStream {
 public:
  /// Takes ownership of `source`. For packed sources the header is read and
  /// validated immediately.
  DigitStream(std::unique_ptr<std::istream> source, DigitFormat format, int base);
  DigitStream(DigitStream&&) noexcept;
  DigitStream& operator=(DigitStream&&) noexcept;
  ~DigitStream();

  int base() const noexcept { return base_; }
  DigitFormat format() const noexcept { return format_; }
  std::optional<std::uint64_t> declared_length() const noexcept { return declared_length_; }
  /// Digits consumed so far.
  std::uint64_t position() const noexcept { return position_; }
  /// Byte offset just past the last consumed digit (ASCII) or of the byte
  /// holding the next digit (packed).
  std::uint64_t byte_offset() const noexcept { return byte_offset_; }

  /// Between 1 and `max_digits` digits, or an empty block at end of stream.
  DigitBlock read_chunk(std::size_t max_digits);

 private:
  DigitBlock read_ascii(std::size_t max_digits);
  DigitBlock read_packed(std::size_t max_digits);
  void skip_ascii_prefix();

  std::unique_ptr<std::istream> source_;
  DigitFormat format_;
  int base_;
  std::optional<std::uint64_t> declared_length_;
  std::uint64_t position_ = 0;
  std::uint64_t byte_offset_ = 0;
  std::uint64_t scan_offset_ = 0;
  std::optional<Digit> pending_low_nibble_;
  std::optional<char> pending_char_;
  bool truncated_ = false;
};

/// Opens a file. Throws kIo if it cannot be opened.
DigitStream open_stream(const std::filesystem::path& path, DigitFormat format, int base);
/// Stream over an in-memory byte string.
DigitStream open_memory_stream(std::string bytes, DigitFormat format, int base);

/// Writes header + payload (earlier digit in the high nibble, odd tail padded
/// with a zero low nibble). Every block must be in `base`. Returns bytes
/// written.
std::uint64_t write_packed(int base, std::span<const DigitBlock> blocks, std::ostream& sink);
/// Writes canonical upper-case digits with no prefix and no separators.
std::uint64_t write_ascii(int base, std::span<const DigitBlock> blocks, std::ostream& sink);

}  // namespace pidigits
