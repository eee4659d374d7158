#include "pidigits/digitio.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pidigits/error.hpp"

namespace pidigits {
namespace {

std::vector<Digit> drain(DigitStream& stream, std::size_t chunk = 1000) {
  std::vector<Digit> out;
  for (DigitBlock b = stream.read_chunk(chunk); !b.empty(); b = stream.read_chunk(chunk)) {
    out.insert(out.end(), b.digits().begin(), b.digits().end());
  }
  return out;
}

std::string packed_bytes(int base, const std::vector<Digit>& digits) {
  std::ostringstream out(std::ios::binary);
  const DigitBlock block(base, digits);
  write_packed(base, std::span(&block, 1), out);
  return out.str();
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

TEST(AsciiStream, SkipsPiPrefix) {
  auto stream = open_memory_stream("3.14159", DigitFormat::kAscii, 10);
  EXPECT_EQ(drain(stream), (std::vector<Digit>{1, 4, 1, 5, 9}));
  auto comma = open_memory_stream("  3,14", DigitFormat::kAscii, 10);
  EXPECT_EQ(drain(comma), (std::vector<Digit>{1, 4}));
}

TEST(AsciiStream, BareRunStartingWithThreeKeepsTheThree) {
  auto stream = open_memory_stream("314", DigitFormat::kAscii, 10);
  EXPECT_EQ(drain(stream), (std::vector<Digit>{3, 1, 4}));
}

TEST(AsciiStream, IgnoresWhitespace) {
  auto stream = open_memory_stream("1415 9\n26", DigitFormat::kAscii, 10);
  EXPECT_EQ(drain(stream), (std::vector<Digit>{1, 4, 1, 5, 9, 2, 6}));
  auto crlf = open_memory_stream("\t12\r\n3 ", DigitFormat::kAscii, 10);
  EXPECT_EQ(drain(crlf), (std::vector<Digit>{1, 2, 3}));
}

TEST(AsciiStream, InvalidDigitReportsOffset) {
  auto stream = open_memory_stream("24G", DigitFormat::kAscii, 16);
  try {
    stream.read_chunk(100);
    FAIL() << "expected invalid digit";
  } catch (const InvalidDigitError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidDigit);
    EXPECT_EQ(e.offset(), 2U);
  }
  auto decimal = open_memory_stream("12A", DigitFormat::kAscii, 10);
  EXPECT_THROW(decimal.read_chunk(10), InvalidDigitError);
}

TEST(AsciiStream, HexAcceptsBothCases) {
  auto stream = open_memory_stream("a3Ff", DigitFormat::kAscii, 16);
  EXPECT_EQ(drain(stream), (std::vector<Digit>{10, 3, 15, 15}));
}

TEST(AsciiStream, ChunkingRule) {
  auto stream = open_memory_stream("14159", DigitFormat::kAscii, 10);
  EXPECT_EQ(stream.read_chunk(3).to_string(), "141");
  EXPECT_EQ(stream.position(), 3U);
  EXPECT_EQ(stream.read_chunk(3).to_string(), "59");
  EXPECT_TRUE(stream.read_chunk(3).empty());
  EXPECT_EQ(stream.position(), 5U);

  auto empty = open_memory_stream("", DigitFormat::kAscii, 10);
  EXPECT_TRUE(empty.read_chunk(100).empty());
}

TEST(PackedFormat, HeaderAndPayloadBytes) {
  const std::string hex = packed_bytes(16, {2, 4, 3, 15});
  const std::string expected_hex_header{"PIDG\x01\x10\x00\x00\x04\x00\x00\x00\x00\x00\x00\x00", 16};
  EXPECT_EQ(hex, expected_hex_header + "\x24\x3F");

  const std::string dec = packed_bytes(10, {1, 4, 1, 5, 9});
  const std::string expected_dec_header{"PIDG\x01\x0A\x00\x00\x05\x00\x00\x00\x00\x00\x00\x00", 16};
  EXPECT_EQ(dec, expected_dec_header + std::string("\x14\x15\x90", 3));

  const std::string empty = packed_bytes(10, {});
  EXPECT_EQ(empty.size(), PackedHeader::kSize);
  EXPECT_EQ(PackedHeader::decode(std::span(reinterpret_cast<const std::uint8_t*>(empty.data()), empty.size()))
                .digit_count,
            0U);
}

TEST(PackedFormat, WriteSpansBlocks) {
  std::ostringstream out(std::ios::binary);
  const std::vector<DigitBlock> blocks{DigitBlock(10, {1}), DigitBlock(10, {4, 1}), DigitBlock(10, {5, 9})};
  EXPECT_EQ(write_packed(10, blocks, out), PackedHeader::kSize + 3);
  EXPECT_EQ(out.str().substr(PackedHeader::kSize), std::string("\x14\x15\x90", 3));
}

TEST(PackedFormat, WriteRejectsMixedBases) {
  std::ostringstream out;
  const std::vector<DigitBlock> blocks{DigitBlock(10, {1}), DigitBlock(16, {4})};
  EXPECT_EQ(code_of([&] { write_packed(10, blocks, out); }), ErrorCode::kBaseMismatch);
}

TEST(PackedFormat, TruncatedPayload) {
  std::string bytes = packed_bytes(10, {1, 4, 1, 5, 9});
  bytes.pop_back();  // digit_count 5, payload 2 bytes
  auto stream = open_memory_stream(bytes, DigitFormat::kPacked, 10);
  EXPECT_EQ(stream.read_chunk(4).to_string(), "1415");
  EXPECT_EQ(code_of([&] { stream.read_chunk(1); }), ErrorCode::kTruncated);

  auto greedy = open_memory_stream(bytes, DigitFormat::kPacked, 10);
  EXPECT_EQ(greedy.read_chunk(100).length(), 4U);
  EXPECT_EQ(code_of([&] { greedy.read_chunk(100); }), ErrorCode::kTruncated);
}

TEST(PackedFormat, MalformedHeaders) {
  const std::string good = packed_bytes(16, {2, 4});
  auto corrupt = [&](std::size_t at, char value) {
    std::string bytes = good;
    bytes[at] = value;
    return bytes;
  };
  EXPECT_EQ(code_of([&] { open_memory_stream(corrupt(0, 'X'), DigitFormat::kPacked, 16); }),
            ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of([&] { open_memory_stream(corrupt(4, 2), DigitFormat::kPacked, 16); }),
            ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of([&] { open_memory_stream(corrupt(5, 8), DigitFormat::kPacked, 16); }),
            ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of([&] { open_memory_stream(corrupt(6, 1), DigitFormat::kPacked, 16); }),
            ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of([&] { open_memory_stream(good.substr(0, 10), DigitFormat::kPacked, 16); }),
            ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of([&] { open_memory_stream(good, DigitFormat::kPacked, 10); }),
            ErrorCode::kBaseMismatch);
}

TEST(PackedFormat, NibbleOutOfRangeForBase) {
  std::string bytes = packed_bytes(10, {1, 2});
  bytes[PackedHeader::kSize] = static_cast<char>(0x1C);
  auto stream = open_memory_stream(bytes, DigitFormat::kPacked, 10);
  EXPECT_EQ(code_of([&] { stream.read_chunk(2); }), ErrorCode::kInvalidDigit);
}

TEST(PackedFormat, RoundTripProperty) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> length(0, 300);
  for (int trial = 0; trial < 1000; ++trial) {
    const int base = trial % 2 == 0 ? 10 : 16;
    const auto digits = oracle::random_digits(rng, base, length(rng));
    auto stream = open_memory_stream(packed_bytes(base, digits), DigitFormat::kPacked, base);
    ASSERT_EQ(stream.declared_length(), digits.size());
    ASSERT_EQ(drain(stream, 1 + trial % 17), digits) << "trial " << trial;
  }
}

TEST(DigitStream, ChunkScheduleDoesNotChangeContent) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> chunk(1, 64);
  for (int trial = 0; trial < 200; ++trial) {
    const int base = trial % 2 == 0 ? 10 : 16;
    const auto digits = oracle::random_digits(rng, base, 500);
    const DigitBlock block(base, digits);
    std::string text = block.to_string();
    // Sprinkle whitespace.
    for (std::size_t i = 7; i < text.size(); i += 13) text.insert(i, trial % 3 == 0 ? "\n" : " ");
    for (auto format : {DigitFormat::kAscii, DigitFormat::kPacked}) {
      auto stream = open_memory_stream(format == DigitFormat::kAscii ? text : packed_bytes(base, digits),
                                       format, base);
      std::vector<Digit> got;
      for (;;) {
        const std::size_t max = chunk(rng);
        const DigitBlock b = stream.read_chunk(max);
        ASSERT_LE(b.length(), max);
        if (b.empty()) break;
        got.insert(got.end(), b.digits().begin(), b.digits().end());
      }
      ASSERT_EQ(got, digits);
    }
  }
}

TEST(DigitStream, AsciiWriterIsCanonicalUpperCase) {
  std::ostringstream out;
  const DigitBlock block(16, {2, 4, 3, 15, 10});
  EXPECT_EQ(write_ascii(16, std::span(&block, 1), out), 5U);
  EXPECT_EQ(out.str(), "243FA");
}

TEST(DigitStream, MissingFile) {
  EXPECT_EQ(code_of([] { open_stream("/nonexistent/digits.txt", DigitFormat::kAscii, 10); }),
            ErrorCode::kIo);
}

}  // namespace
}  // namespace pidigits
