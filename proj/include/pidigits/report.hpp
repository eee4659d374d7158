#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pidigits/stats.hpp"

namespace pidigits {

enum class TableFormat { kCsv, kJson };

inline constexpr const char* kTableCsvHeader =
    "base,k,window_count,expected_var,expected_var_unc,observed_var,deviation_sigma";

/// Variance table as CSV (numbers with 6 significant digits) or JSON.
/// Throws kEmpty for an empty row list.
std::string emit_table(std::span<const VarianceRow> rows, TableFormat format);

/// Parses a CSV produced by emit_table.
std::vector<VarianceRow> parse_table_csv(const std::string& csv);

/// SVG 1.1 plot of every sequence frequency against its index, with the 1σ
/// and 2σ bands and the center line. Throws kShapeMismatch if `bands` was not
/// computed for `report`.
std::string render_band_plot(const FrequencyReport& report, const BandSpec& bands);

struct FrequencyDigest {
  int k = 1;
  std::uint64_t window_count = 0;
  double min_z = 0.0;
  double max_z = 0.0;
  std::uint64_t max_abs_z_index = 0;
  double max_abs_z = 0.0;
  bool exceeds_4_sigma = false;
};

FrequencyDigest digest(const FrequencyReport& report);

struct RunSummary {
  std::string input;
  int base = 10;
  std::uint64_t total_digits = 0;
  std::vector<FrequencyDigest> frequency_digests;
  std::vector<VarianceRow> variance_rows;
  std::string tool_version;
  std::string timestamp;
};

nlohmann::json to_json(const VarianceRow& row);
nlohmann::json to_json(const FrequencyDigest& digest);
nlohmann::json to_json(const RunSummary& summary);

/// 6-significant-digit scientific notation, e.g. 4.00727e-15.
std::string format_sci(double value);

}  // namespace pidigits
