#include "pidigits/digitio.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <streambuf>

#include <fmt/format.h>

#include "pidigits/error.hpp"

namespace pidigits {
namespace {

bool is_space(int c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

void check_file_base(int base) {
  if (base != 10 && base != 16) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("digit files hold base 10 or 16, not {}", base));
  }
}

void check_blocks(int base, std::span<const DigitBlock> blocks) {
  check_file_base(base);
  for (const auto& block : blocks) {
    if (block.base() != base) {
      throw Error(ErrorCode::kBaseMismatch,
                  fmt::format("block in base {} written to a base {} file", block.base(), base));
    }
  }
}

void write_bytes(std::ostream& sink, const void* data, std::size_t size) {
  sink.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!sink) throw Error(ErrorCode::kIo, "write failed");
}

}  // namespace

std::string to_string(DigitFormat format) {
  return format == DigitFormat::kAscii ? "ascii" : "packed";
}

DigitFormat parse_digit_format(std::string_view name) {
  if (name == "ascii") return DigitFormat::kAscii;
  if (name == "packed") return DigitFormat::kPacked;
  throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown digit format '{}'", name));
}

std::array<std::uint8_t, PackedHeader::kSize> PackedHeader::encode() const {
  std::array<std::uint8_t, kSize> out{};
  std::copy(kMagic.begin(), kMagic.end(), out.begin());
  out[4] = kVersion;
  out[5] = base;
  for (int i = 0; i < 8; ++i) out[8 + i] = static_cast<std::uint8_t>(digit_count >> (8 * i));
  return out;
}

PackedHeader PackedHeader::decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSize) {
    throw Error(ErrorCode::kMalformedHeader,
                fmt::format("packed header needs {} bytes, got {}", kSize, bytes.size()));
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::kMalformedHeader, "bad magic, expected \"PIDG\"");
  }
  if (bytes[4] != kVersion) {
    throw Error(ErrorCode::kMalformedHeader, fmt::format("unsupported version {}", bytes[4]));
  }
  if (bytes[5] != 10 && bytes[5] != 16) {
    throw Error(ErrorCode::kMalformedHeader, fmt::format("unsupported base {}", bytes[5]));
  }
  if (bytes[6] != 0 || bytes[7] != 0) {
    throw Error(ErrorCode::kMalformedHeader, "reserved header bytes are not zero");
  }
  PackedHeader header;
  header.base = bytes[5];
  for (int i = 0; i < 8; ++i) header.digit_count |= std::uint64_t{bytes[8 + i]} << (8 * i);
  return header;
}

DigitStream::DigitStream(std::unique_ptr<std::istream> source, DigitFormat format, int base)
    : source_(std::move(source)), format_(format), base_(base) {
  check_file_base(base);
  if (!source_ || !*source_) throw Error(ErrorCode::kIo, "digit source is not readable");
  if (format_ == DigitFormat::kPacked) {
    std::array<std::uint8_t, PackedHeader::kSize> raw{};
    source_->read(reinterpret_cast<char*>(raw.data()), raw.size());
    const auto got = static_cast<std::size_t>(source_->gcount());
    const PackedHeader header = PackedHeader::decode(std::span(raw.data(), got));
    if (header.base != base_) {
      throw Error(ErrorCode::kBaseMismatch,
                  fmt::format("file holds base {} digits, base {} requested", header.base, base_));
    }
    declared_length_ = header.digit_count;
    byte_offset_ = PackedHeader::kSize;
  } else {
    skip_ascii_prefix();
  }
}

DigitStream::DigitStream(DigitStream&&) noexcept = default;
DigitStream& DigitStream::operator=(DigitStream&&) noexcept = default;
DigitStream::~DigitStream() = default;

void DigitStream::skip_ascii_prefix() {
  std::streambuf* buf = source_->rdbuf();
  while (is_space(buf->sgetc())) {
    buf->sbumpc();
    ++scan_offset_;
  }
  if (buf->sgetc() != '3') return;
  buf->sbumpc();
  const int next = buf->sgetc();
  if (next == '.' || next == ',') {
    buf->sbumpc();
    scan_offset_ += 2;
    byte_offset_ = scan_offset_;
  } else {
    // A bare digit run that happens to start with 3.
    pending_char_ = '3';
  }
}

DigitBlock DigitStream::read_chunk(std::size_t max_digits) {
  if (max_digits == 0) throw Error(ErrorCode::kInvalidArgument, "max_digits must be positive");
  return format_ == DigitFormat::kAscii ? read_ascii(max_digits) : read_packed(max_digits);
}

DigitBlock DigitStream::read_ascii(std::size_t max_digits) {
  std::vector<Digit> digits;
  digits.reserve(std::min<std::size_t>(max_digits, 1 << 16));
  std::streambuf* buf = source_->rdbuf();
  while (digits.size() < max_digits) {
    int c;
    if (pending_char_) {
      c = *pending_char_;
      pending_char_.reset();
    } else {
      c = buf->sbumpc();
      if (c == std::char_traits<char>::eof()) break;
    }
    const std::uint64_t offset = scan_offset_++;
    if (is_space(c)) continue;
    const int v = digit_value(static_cast<char>(c));
    if (v < 0 || v >= base_) throw InvalidDigitError(offset, static_cast<char>(c));
    digits.push_back(static_cast<Digit>(v));
    byte_offset_ = scan_offset_;
  }
  position_ += digits.size();
  return DigitBlock(base_, std::move(digits));
}

DigitBlock DigitStream::read_packed(std::size_t max_digits) {
  const std::uint64_t remaining = *declared_length_ - position_;
  const auto wanted = static_cast<std::size_t>(std::min<std::uint64_t>(remaining, max_digits));
  if (wanted > 0 && truncated_) {
    throw Error(ErrorCode::kTruncated,
                fmt::format("packed payload ends before digit {} of {}", position_, *declared_length_));
  }
  std::vector<Digit> digits;
  digits.reserve(wanted);
  std::streambuf* buf = source_->rdbuf();
  while (digits.size() < wanted) {
    Digit d;
    if (pending_low_nibble_) {
      d = *pending_low_nibble_;
      pending_low_nibble_.reset();
    } else {
      const int byte = buf->sbumpc();
      if (byte == std::char_traits<char>::eof()) {
        truncated_ = true;
        break;
      }
      d = static_cast<Digit>((byte >> 4) & 0x0F);
      pending_low_nibble_ = static_cast<Digit>(byte & 0x0F);
    }
    if (d >= base_) {
      throw Error(ErrorCode::kInvalidDigit,
                  fmt::format("nibble {} at digit {} is not a base {} digit", static_cast<int>(d),
                              position_ + digits.size(), base_));
    }
    digits.push_back(d);
  }
  if (digits.empty() && truncated_) {
    throw Error(ErrorCode::kTruncated,
                fmt::format("packed payload ends before digit {} of {}", position_, *declared_length_));
  }
  position_ += digits.size();
  byte_offset_ = PackedHeader::kSize + position_ / 2;
  return DigitBlock(base_, std::move(digits));
}

DigitStream open_stream(const std::filesystem::path& path, DigitFormat format, int base) {
  auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*file) throw Error(ErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  return DigitStream(std::move(file), format, base);
}

DigitStream open_memory_stream(std::string bytes, DigitFormat format, int base) {
  return DigitStream(std::make_unique<std::istringstream>(std::move(bytes), std::ios::binary),
                     format, base);
}

std::uint64_t write_packed(int base, std::span<const DigitBlock> blocks, std::ostream& sink) {
  check_blocks(base, blocks);
  PackedHeader header;
  header.base = static_cast<std::uint8_t>(base);
  for (const auto& block : blocks) header.digit_count += block.length();
  const auto head = header.encode();
  write_bytes(sink, head.data(), head.size());
  std::uint64_t written = head.size();

  std::vector<std::uint8_t> out;
  std::optional<Digit> high;
  for (const auto& block : blocks) {
    out.clear();
    out.reserve(block.length() / 2 + 1);
    for (Digit d : block.digits()) {
      if (high) {
        out.push_back(static_cast<std::uint8_t>((*high << 4) | d));
        high.reset();
      } else {
        high = d;
      }
    }
    write_bytes(sink, out.data(), out.size());
    written += out.size();
  }
  if (high) {
    const auto last = static_cast<std::uint8_t>(*high << 4);
    write_bytes(sink, &last, 1);
    ++written;
  }
  return written;
}

std::uint64_t write_ascii(int base, std::span<const DigitBlock> blocks, std::ostream& sink) {
  check_blocks(base, blocks);
  std::uint64_t written = 0;
  for (const auto& block : blocks) {
    const std::string text = block.to_string();
    write_bytes(sink, text.data(), text.size());
    written += text.size();
  }
  return written;
}

}  // namespace pidigits
