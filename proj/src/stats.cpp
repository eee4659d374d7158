#include "pidigits/stats.hpp"

#include <cmath>

#include <fmt/format.h>

#include "pidigits/error.hpp"

namespace pidigits {
namespace {

double sigma_of(double p, std::uint64_t windows) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(windows));
}

std::uint64_t windows_or_throw(int k, std::uint64_t digit_count) {
  if (k < 1 || digit_count < static_cast<std::uint64_t>(k)) {
    throw Error(ErrorCode::kDomain,
                fmt::format("{} digits hold no window of length {}", digit_count, k));
  }
  return digit_count - static_cast<std::uint64_t>(k) + 1;
}

}  // namespace

double expected_frequency(int base, int k) {
  return 1.0 / static_cast<double>(table_size(base, k));
}

FrequencyReport frequencies(const CountTable& table) {
  if (table.window_count == 0) {
    throw Error(ErrorCode::kEmpty, fmt::format("no windows counted for k={}", table.k));
  }
  FrequencyReport report;
  report.base = table.base;
  report.k = table.k;
  report.window_count = table.window_count;
  report.expected_freq = expected_frequency(table.base, table.k);
  report.sigma_f = sigma_of(report.expected_freq, table.window_count);

  const auto w = static_cast<double>(table.window_count);
  report.freqs.reserve(table.counts.size());
  report.zscores.reserve(table.counts.size());
  for (std::uint64_t c : table.counts) {
    const double f = static_cast<double>(c) / w;
    report.freqs.push_back(f);
    report.zscores.push_back((f - report.expected_freq) / report.sigma_f);
  }
  return report;
}

ExpectedVariance expected_variance(int base, int k, std::uint64_t digit_count) {
  const std::uint64_t windows = windows_or_throw(k, digit_count);
  const double m = static_cast<double>(table_size(base, k));
  const double p = 1.0 / m;
  const double value = p * (1.0 - p) / static_cast<double>(windows);
  return {value, value * std::sqrt(2.0 / (m - 1.0))};
}

double observed_variance(std::span<const double> freqs) {
  const std::size_t m = freqs.size();
  if (m < 2) {
    throw Error(ErrorCode::kDomain, "variance needs at least two sequences");
  }
  // Neumaier-compensated mean, then the corrected two-pass sum.
  double sum = 0.0;
  double comp = 0.0;
  for (double f : freqs) {
    const double t = sum + f;
    comp += std::abs(sum) >= std::abs(f) ? (sum - t) + f : (f - t) + sum;
    sum = t;
  }
  const double mean = (sum + comp) / static_cast<double>(m);
  double squares = 0.0;
  double residual = 0.0;
  for (double f : freqs) {
    const double d = f - mean;
    squares += d * d;
    residual += d;
  }
  return (squares - residual * residual / static_cast<double>(m)) / static_cast<double>(m - 1);
}

double observed_variance(const FrequencyReport& report) { return observed_variance(report.freqs); }

double variance_deviation(double expected_var, double expected_var_unc, double observed_var) {
  if (!(expected_var_unc > 0.0)) {
    throw Error(ErrorCode::kDomain, "variance uncertainty must be positive");
  }
  return (expected_var - observed_var) / expected_var_unc;
}

ExtremeZ max_abs_z(const FrequencyReport& report) {
  if (report.zscores.empty()) throw Error(ErrorCode::kEmpty, "report has no sequences");
  ExtremeZ best;
  for (std::size_t i = 0; i < report.zscores.size(); ++i) {
    const double a = std::abs(report.zscores[i]);
    if (a > best.abs_z) {
      best.index = i;
      best.abs_z = a;
    }
  }
  best.exceeds_4_sigma = best.abs_z > 4.0;
  return best;
}

BandSpec sigma_bands(int base, int k, std::uint64_t digit_count) {
  const std::uint64_t windows = windows_or_throw(k, digit_count);
  const double p = expected_frequency(base, k);
  const double one = sigma_of(p, windows);
  return {p, one, 2.0 * one};
}

BandSpec sigma_bands(const FrequencyReport& report) {
  return sigma_bands(report.base, report.k, report.window_count + static_cast<std::uint64_t>(report.k) - 1);
}

VarianceRow variance_row(const FrequencyReport& report) {
  const auto digits = report.window_count + static_cast<std::uint64_t>(report.k) - 1;
  const ExpectedVariance expected = expected_variance(report.base, report.k, digits);
  VarianceRow row;
  row.base = report.base;
  row.k = report.k;
  row.window_count = report.window_count;
  row.expected_var = expected.value;
  row.expected_var_unc = expected.uncertainty;
  row.observed_var = observed_variance(report);
  row.deviation_sigma = variance_deviation(row.expected_var, row.expected_var_unc, row.observed_var);
  return row;
}

}  // namespace pidigits
