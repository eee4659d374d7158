#pragma once

// Test-only reference computations. Nothing here may call into the library
// routine it is used to check.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using boost::multiprecision::cpp_int;

// sum_n (-1)^n scale / ((2n+1) x^(2n+1))
inline cpp_int arctan_inverse(unsigned x, const cpp_int& scale) {
  const cpp_int x2 = cpp_int(x) * x;
  cpp_int power = scale / x;
  cpp_int sum = power;
  for (unsigned n = 1; power != 0; ++n) {
    power /= x2;
    const cpp_int term = power / (2 * n + 1);
    if (n & 1) {
      sum -= term;
    } else {
      sum += term;
    }
  }
  return sum;
}

/// First n fractional decimal digits of pi from Machin's formula
/// pi = 16 atan(1/5) - 4 atan(1/239).
inline std::vector<std::uint8_t> machin_pi_decimal(std::size_t n) {
  constexpr std::size_t kGuard = 12;
  cpp_int scale = 1;
  for (std::size_t i = 0; i < n + kGuard; ++i) scale *= 10;
  const cpp_int pi = 16 * arctan_inverse(5, scale) - 4 * arctan_inverse(239, scale);
  const std::string text = pi.str();
  std::vector<std::uint8_t> digits;
  for (std::size_t i = 1; i <= n; ++i) digits.push_back(static_cast<std::uint8_t>(text[i] - '0'));
  return digits;
}

/// Converts 0.d1 d2 ... dn (base 10) to its first `hex_digits` hex digits.
inline std::vector<std::uint8_t> decimal_fraction_to_hex(const std::vector<std::uint8_t>& decimal,
                                                         std::size_t hex_digits) {
  cpp_int value = 0;
  cpp_int denom = 1;
  for (auto d : decimal) {
    value = value * 10 + d;
    denom *= 10;
  }
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < hex_digits; ++i) {
    value *= 16;
    out.push_back(static_cast<std::uint8_t>(value / denom));
    value %= denom;
  }
  return out;
}

/// Direct tally of every length-k window, index by positional value.
inline std::vector<std::uint64_t> tally(const std::vector<std::uint8_t>& digits, int base, int k) {
  std::size_t size = 1;
  for (int i = 0; i < k; ++i) size *= static_cast<std::size_t>(base);
  std::vector<std::uint64_t> counts(size, 0);
  for (std::size_t start = 0; start + static_cast<std::size_t>(k) <= digits.size(); ++start) {
    std::size_t index = 0;
    for (int j = 0; j < k; ++j) index = index * static_cast<std::size_t>(base) + digits[start + static_cast<std::size_t>(j)];
    ++counts[index];
  }
  return counts;
}

/// Textbook two-pass sample variance, divisor n - 1.
inline double sample_variance(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(xs.size() - 1);
}

inline std::vector<std::uint8_t> random_digits(std::mt19937_64& rng, int base, std::size_t n) {
  std::uniform_int_distribution<int> dist(0, base - 1);
  std::vector<std::uint8_t> out(n);
  for (auto& d : out) d = static_cast<std::uint8_t>(dist(rng));
  return out;
}

}  // namespace oracle
