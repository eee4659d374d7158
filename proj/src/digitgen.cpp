#include "pidigits/digitgen.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "pidigits/error.hpp"

namespace pidigits {
namespace {

// 640320^3 / 24
const mpz_class kC3Over24{"10939058860032000"};
constexpr unsigned long kA = 13591409;
constexpr unsigned long kB = 545140134;

struct Split {
  mpz_class p;
  mpz_class q;
  mpz_class t;
};

// Binary splitting of the Chudnovsky series over terms [a, b).
// P(a,b) is not needed for the outermost right-hand branch, which saves the
// largest multiplication.
void split(std::uint64_t a, std::uint64_t b, Split& out, bool need_p) {
  if (b - a == 1) {
    if (a == 0) {
      out.p = 1;
      out.q = 1;
    } else {
      out.p = mpz_class(6 * a - 5) * (2 * a - 1) * (6 * a - 1);
      out.q = mpz_class(a) * a * a * kC3Over24;
    }
    out.t = out.p * (mpz_class(kA) + mpz_class(kB) * a);
    if (a & 1) out.t = -out.t;
    return;
  }
  const std::uint64_t m = a + (b - a) / 2;
  Split left;
  Split right;
  split(a, m, left, true);
  split(m, b, right, need_p);
  out.t = left.t * right.q + left.p * right.t;
  out.q = left.q * right.q;
  if (need_p) out.p = left.p * right.p;
}

// floor(pi * scale), up to a couple of units of error in the last place.
mpz_class scaled_pi(const mpz_class& scale, double decimal_digits) {
  Split s;
  split(0, chudnovsky_terms(decimal_digits), s, false);
  mpz_class root;
  mpz_class radicand = scale * scale * 10005;
  mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
  mpz_class numerator = root * s.q * 426880;
  mpz_class result;
  mpz_fdiv_q(result.get_mpz_t(), numerator.get_mpz_t(), s.t.get_mpz_t());
  return result;
}

void check_request(std::uint64_t n_digits, const GenOptions& options) {
  if (n_digits > options.max_digits) {
    throw Error(ErrorCode::kResourceLimit,
                fmt::format("{} digits requested, limit is {}", n_digits, options.max_digits));
  }
}

// Fractional digits 1..n_digits of pi in `base`, computed with `guard` extra
// digits of working precision.
std::vector<Digit> fractional_digits(int base, std::uint64_t n_digits, unsigned guard) {
  const std::uint64_t precision = n_digits + guard;
  mpz_class scale;
  double decimal_digits = 0.0;
  if (base == 10) {
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, precision);
    decimal_digits = static_cast<double>(precision);
  } else {
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, 4 * precision);
    decimal_digits = static_cast<double>(precision) * std::log10(16.0);
  }
  const std::string text = scaled_pi(scale, decimal_digits).get_str(base);
  if (text.size() != precision + 1 || text[0] != '3') {
    throw Error(ErrorCode::kPrecision, "unexpected magnitude of scaled pi");
  }
  std::vector<Digit> digits(n_digits);
  for (std::uint64_t i = 0; i < n_digits; ++i) {
    digits[i] = static_cast<Digit>(digit_value(text[i + 1]));
  }
  return digits;
}

DigitBlock generate(int base, std::uint64_t n_digits, const GenOptions& options) {
  check_request(n_digits, options);
  if (n_digits == 0) return DigitBlock(base);
  std::vector<Digit> digits = fractional_digits(base, n_digits, options.guard_digits);
  if (n_digits > options.self_check_above) {
    const std::vector<Digit> check = fractional_digits(base, n_digits, 2 * options.guard_digits);
    const std::size_t tail = std::min<std::size_t>(10, n_digits);
    if (!std::equal(digits.end() - static_cast<std::ptrdiff_t>(tail), digits.end(),
                    check.end() - static_cast<std::ptrdiff_t>(tail))) {
      throw Error(ErrorCode::kPrecision,
                  fmt::format("final digits changed when regenerating with {} guard digits",
                              2 * options.guard_digits));
    }
  }
  return DigitBlock(base, std::move(digits));
}

using u128 = unsigned __int128;

std::uint64_t pow16_mod(std::uint64_t exponent, std::uint64_t modulus) {
  if (modulus == 1) return 0;
  std::uint64_t result = 1;
  std::uint64_t base = 16 % modulus;
  if (modulus <= 0xFFFFFFFFULL) {
    while (exponent != 0) {
      if (exponent & 1) result = result * base % modulus;
      base = base * base % modulus;
      exponent >>= 1;
    }
  } else {
    while (exponent != 0) {
      if (exponent & 1) result = static_cast<std::uint64_t>(u128(result) * base % modulus);
      base = static_cast<std::uint64_t>(u128(base) * base % modulus);
      exponent >>= 1;
    }
  }
  return result;
}

// floor(2^128 * r / m) for r < m < 2^63.
u128 fixed_fraction(std::uint64_t r, std::uint64_t m) {
  const u128 shifted = u128(r) << 64;
  const u128 hi = shifted / m;
  const u128 rem = shifted % m;
  const u128 lo = (rem << 64) / m;
  return (hi << 64) | lo;
}

// frac(sum_k 16^(d-k) / (8k+j)) as a 128-bit fixed-point fraction. Every term
// is truncated, so the result is low by at most d + 34 units.
u128 bbp_series(std::uint64_t d, std::uint64_t j) {
  u128 sum = 0;
  for (std::uint64_t k = 0; k <= d; ++k) {
    const std::uint64_t m = 8 * k + j;
    sum += fixed_fraction(pow16_mod(d - k, m), m);
  }
  for (unsigned i = 1; i < 32; ++i) {
    const std::uint64_t m = 8 * (d + i) + j;
    sum += (u128(1) << (128 - 4 * i)) / m;
  }
  return sum;
}

}  // namespace

std::uint64_t chudnovsky_terms(double decimal_digits) {
  static const double digits_per_term = std::log10(640320.0 * 640320.0 * 640320.0 / 24 / 6 / 2 / 6);
  return static_cast<std::uint64_t>(std::ceil(decimal_digits / digits_per_term)) + 2;
}

DigitBlock gen_pi_decimal(std::uint64_t n_digits, const GenOptions& options) {
  return generate(10, n_digits, options);
}

DigitBlock gen_pi_hex(std::uint64_t n_digits, const GenOptions& options) {
  return generate(16, n_digits, options);
}

DigitBlock bbp_hex_at(std::uint64_t position, unsigned count) {
  if (count == 0 || count > kBbpMaxCount) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("count must be in 1..{}, got {}", kBbpMaxCount, count));
  }
  if (position > kBbpMaxPosition || position + count > kBbpMaxPosition) {
    throw Error(ErrorCode::kRange, fmt::format("position {} is beyond the supported range", position));
  }
  // pi = sum 16^-k (4/(8k+1) - 2/(8k+4) - 1/(8k+5) - 1/(8k+6))
  const u128 x = 4 * bbp_series(position, 1) - 2 * bbp_series(position, 4) -
                 bbp_series(position, 5) - bbp_series(position, 6);

  // Truncation errors of the four sums combine to at most 4(d+34) units either way.
  const u128 bound = 4 * (u128(position) + 34);
  const u128 lo = x - bound;
  const u128 hi = x + bound;
  const unsigned shift = 128 - 4 * count;
  if (lo > x || hi < x || (lo >> shift) != (hi >> shift)) {
    throw Error(ErrorCode::kPrecision,
                fmt::format("hex digits at position {} are not certain", position));
  }

  std::vector<Digit> digits(count);
  for (unsigned i = 0; i < count; ++i) {
    digits[i] = static_cast<Digit>((x >> (124 - 4 * i)) & 0x0F);
  }
  return DigitBlock(16, std::move(digits));
}

}  // namespace pidigits
