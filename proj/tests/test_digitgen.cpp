#include "pidigits/digitgen.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pidigits/error.hpp"

namespace pidigits {
namespace {

std::vector<Digit> as_vector(const DigitBlock& block) {
  return {block.digits().begin(), block.digits().end()};
}

TEST(GenPiDecimal, EmptyRequest) {
  const DigitBlock block = gen_pi_decimal(0);
  EXPECT_EQ(block.base(), 10);
  EXPECT_TRUE(block.empty());
}

TEST(GenPiDecimal, FirstTwentyDigits) {
  // Frozen from the Machin-formula oracle.
  const std::vector<Digit> expected{1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3, 2, 3, 8, 4, 6};
  ASSERT_EQ(oracle::machin_pi_decimal(20), expected);
  EXPECT_EQ(as_vector(gen_pi_decimal(20)), expected);
  EXPECT_EQ(as_vector(gen_pi_decimal(1)), std::vector<Digit>{1});
}

TEST(GenPiDecimal, MatchesMachinOracle) {
  for (std::size_t n : {7U, 100U, 1000U, 3001U}) {
    EXPECT_EQ(as_vector(gen_pi_decimal(n)), oracle::machin_pi_decimal(n)) << "n=" << n;
  }
}

TEST(GenPiDecimal, ResourceLimit) {
  GenOptions options;
  options.max_digits = 50;
  EXPECT_NO_THROW(gen_pi_decimal(50, options));
  try {
    gen_pi_decimal(51, options);
    FAIL() << "expected a resource-limit error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kResourceLimit);
  }
  EXPECT_THROW(gen_pi_hex(51, options), Error);
}

TEST(GenPiDecimal, SelfCheckPathAgrees) {
  GenOptions checked;
  checked.self_check_above = 100;
  EXPECT_EQ(gen_pi_decimal(2000, checked), gen_pi_decimal(2000));
  EXPECT_EQ(gen_pi_hex(2000, checked), gen_pi_hex(2000));
}

TEST(GenPiHex, KnownPrefix) {
  EXPECT_TRUE(gen_pi_hex(0).empty());
  EXPECT_EQ(gen_pi_hex(10).to_string(), "243F6A8885");
  EXPECT_EQ(gen_pi_hex(1).to_string(), "2");
  EXPECT_EQ(gen_pi_hex(10).base(), 16);
}

TEST(GenPi, PrefixProperty) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> dist(0, 4000);
  for (int trial = 0; trial < 10; ++trial) {
    auto n = dist(rng);
    auto m = dist(rng);
    if (n > m) std::swap(n, m);
    for (auto gen : {&gen_pi_decimal, &gen_pi_hex}) {
      const DigitBlock shorter = gen(n, {});
      const DigitBlock longer = gen(m, {});
      ASSERT_EQ(shorter.length(), n);
      ASSERT_EQ(longer.length(), m);
      EXPECT_TRUE(std::equal(shorter.digits().begin(), shorter.digits().end(), longer.digits().begin()))
          << "n=" << n << " m=" << m;
    }
  }
}

TEST(GenPi, DecimalConvertsToHex) {
  for (std::size_t n : {10U, 100U, 2500U}) {
    const auto decimal = as_vector(gen_pi_decimal(n));
    const auto hex_len = static_cast<std::size_t>(std::floor(n * std::log(10.0) / std::log(16.0))) - 2;
    const auto converted = oracle::decimal_fraction_to_hex(decimal, hex_len);
    EXPECT_EQ(as_vector(gen_pi_hex(hex_len)), converted) << "n=" << n;
  }
}

TEST(BbpHexAt, Examples) {
  EXPECT_EQ(bbp_hex_at(0, 4).to_string(), "243F");
  EXPECT_EQ(bbp_hex_at(4, 4).to_string(), "6A88");
  EXPECT_EQ(bbp_hex_at(10, 2).to_string(), "A3");
}

TEST(BbpHexAt, SixteenDigitRuns) {
  const DigitBlock reference = gen_pi_hex(2100);
  for (std::uint64_t p : {0ULL, 1ULL, 255ULL, 1000ULL, 2080ULL}) {
    const DigitBlock run = bbp_hex_at(p, 16);
    EXPECT_TRUE(std::equal(run.digits().begin(), run.digits().end(),
                           reference.digits().begin() + static_cast<std::ptrdiff_t>(p)))
        << "position " << p;
  }
}

TEST(BbpHexAt, ConcatenationMatchesFullEvaluation) {
  constexpr std::size_t kN = 1500;
  const DigitBlock reference = gen_pi_hex(kN);
  DigitBlock assembled(16);
  for (std::uint64_t p = 0; p < kN; ++p) assembled.append(bbp_hex_at(p, 1).digits());
  EXPECT_EQ(assembled, reference);
}

TEST(BbpHexAt, FarPositionAgreesWithFullEvaluation) {
  constexpr std::uint64_t kPosition = 1'000'000;
  const DigitBlock reference = gen_pi_hex(kPosition + 16);
  const auto expected = DigitBlock(16, {reference.digits().begin() + kPosition, reference.digits().end()});
  EXPECT_EQ(bbp_hex_at(kPosition, 16), expected);
  EXPECT_EQ(bbp_hex_at(kPosition, 8).to_string(), expected.to_string().substr(0, 8));
  EXPECT_EQ(bbp_hex_at(kPosition + 4, 4).to_string(), expected.to_string().substr(4, 4));
}

TEST(BbpHexAt, RejectsBadArguments) {
  try {
    bbp_hex_at(0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  EXPECT_THROW(bbp_hex_at(0, 17), Error);
  try {
    bbp_hex_at(kBbpMaxPosition, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRange);
  }
}

TEST(Chudnovsky, TermCount) {
  const double per_term = std::log10(640320.0 * 640320.0 * 640320.0 / 1728.0);
  EXPECT_NEAR(per_term, 14.1816, 1e-4);
  EXPECT_EQ(chudnovsky_terms(1000), static_cast<std::uint64_t>(std::ceil(1000 / per_term)) + 2);
}

}  // namespace
}  // namespace pidigits
