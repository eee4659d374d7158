#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pidigits/counter.hpp"

namespace pidigits {

/// Frequencies and binomial z-scores for one CountTable.
struct FrequencyReport {
  int base = 10;
  int k = 1;
  std::uint64_t window_count = 0;
  double expected_freq = 0.0;  // b^-k
  double sigma_f = 0.0;        // sqrt(p(1-p)/W)
  std::vector<double> freqs;
  std::vector<double> zscores;
};

struct VarianceRow {
  int base = 10;
  int k = 1;
  std::uint64_t window_count = 0;
  double expected_var = 0.0;
  double expected_var_unc = 0.0;
  double observed_var = 0.0;
  double deviation_sigma = 0.0;
};

struct BandSpec {
  double center = 0.0;
  double one_sigma = 0.0;
  double two_sigma = 0.0;
};

struct ExpectedVariance {
  double value = 0.0;
  double uncertainty = 0.0;
};

struct ExtremeZ {
  std::size_t index = 0;
  double abs_z = 0.0;
  bool exceeds_4_sigma = false;
};

/// b^-k computed exactly for the supported range.
double expected_frequency(int base, int k);

/// Throws kEmpty when the table has no windows.
FrequencyReport frequencies(const CountTable& table);

/// With W = N - k + 1, p = b^-k, m = b^k:
///   value = p(1-p)/W, uncertainty = value * sqrt(2/(m-1)).
/// Throws kDomain if N < k.
ExpectedVariance expected_variance(int base, int k, std::uint64_t digit_count);

/// Sample variance of the frequencies, divisor m - 1.
double observed_variance(std::span<const double> freqs);
double observed_variance(const FrequencyReport& report);

/// (expected - observed) / uncertainty; observed above expected is negative.
double variance_deviation(double expected_var, double expected_var_unc, double observed_var);

/// Largest |z|; ties resolve to the lowest index.
ExtremeZ max_abs_z(const FrequencyReport& report);

BandSpec sigma_bands(int base, int k, std::uint64_t digit_count);
/// Bands for an already-counted report (uses its own W).
BandSpec sigma_bands(const FrequencyReport& report);

/// Full variance-of-frequencies row for a counted table.
VarianceRow variance_row(const FrequencyReport& report);

}  // namespace pidigits
