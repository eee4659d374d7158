#include "pidigits/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "pidigits/error.hpp"

namespace pidigits {
namespace {

constexpr double kWidth = 960;
constexpr double kHeight = 540;
constexpr double kLeft = 100;
constexpr double kRight = 30;
constexpr double kTop = 50;
constexpr double kBottom = 60;

std::string sequence_label(std::size_t index, int base, int k) {
  std::string label(static_cast<std::size_t>(k), '0');
  for (int i = k - 1; i >= 0; --i) {
    label[static_cast<std::size_t>(i)] = digit_char(static_cast<Digit>(index % static_cast<std::size_t>(base)));
    index /= static_cast<std::size_t>(base);
  }
  return label;
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::string format_sci(double value) { return fmt::format("{:.5e}", value); }

std::string emit_table(std::span<const VarianceRow> rows, TableFormat format) {
  if (rows.empty()) throw Error(ErrorCode::kEmpty, "no variance rows to emit");
  if (format == TableFormat::kJson) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& row : rows) doc.push_back(to_json(row));
    return doc.dump(2) + "\n";
  }
  std::string out = kTableCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.base, r.k, r.window_count,
                       format_sci(r.expected_var), format_sci(r.expected_var_unc),
                       format_sci(r.observed_var), format_sci(r.deviation_sigma));
  }
  return out;
}

std::vector<VarianceRow> parse_table_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kTableCsvHeader) {
    throw Error(ErrorCode::kMalformedHeader, "variance table CSV header is missing or wrong");
  }
  std::vector<VarianceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream cells(line);
    for (std::string cell; std::getline(cells, cell, ',');) fields.push_back(cell);
    if (fields.size() != 7) {
      throw Error(ErrorCode::kMalformedHeader, fmt::format("expected 7 fields in '{}'", line));
    }
    try {
      VarianceRow row;
      row.base = std::stoi(fields[0]);
      row.k = std::stoi(fields[1]);
      row.window_count = std::stoull(fields[2]);
      row.expected_var = std::stod(fields[3]);
      row.expected_var_unc = std::stod(fields[4]);
      row.observed_var = std::stod(fields[5]);
      row.deviation_sigma = std::stod(fields[6]);
      rows.push_back(row);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kMalformedHeader, fmt::format("unparseable row '{}'", line));
    }
  }
  return rows;
}

std::string render_band_plot(const FrequencyReport& report, const BandSpec& bands) {
  const std::size_t m = report.freqs.size();
  if (m == 0 || m != report.zscores.size()) {
    throw Error(ErrorCode::kShapeMismatch, "report has no sequences");
  }
  if (!close(bands.center, report.expected_freq) || !close(bands.one_sigma, report.sigma_f) ||
      !close(bands.two_sigma, 2.0 * bands.one_sigma)) {
    throw Error(ErrorCode::kShapeMismatch, "bands were not computed for this report");
  }

  double spread = 0.0;
  for (double f : report.freqs) spread = std::max(spread, std::abs(f - bands.center));
  double half_range = std::max(3.0 * bands.one_sigma, 1.1 * spread);
  if (half_range <= 0.0) half_range = bands.center > 0.0 ? 0.01 * bands.center : 1.0;
  const double y_hi = bands.center + half_range;
  const double y_lo = bands.center - half_range;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto x_of = [&](double i) { return kLeft + (i + 0.5) * plot_w / static_cast<double>(m); };
  auto y_of = [&](double f) { return kTop + (y_hi - f) / (y_hi - y_lo) * plot_h; };

  std::string svg;
  svg += fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" data-base=\"{2}\" data-k=\"{3}\" data-window-count=\"{4}\">\n",
      kWidth, kHeight, report.base, report.k, report.window_count);
  svg += fmt::format(
      "<title>Frequencies of all length-{} sequences, base {}, {} windows</title>\n", report.k,
      report.base, report.window_count);
  svg += fmt::format("<rect class=\"background\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
                     kWidth, kHeight);

  auto band = [&](const char* cls, double half, const char* fill) {
    const double top = y_of(bands.center + half);
    const double bottom = y_of(bands.center - half);
    svg += fmt::format(
        "<rect class=\"{}\" x=\"{:.6f}\" y=\"{:.6f}\" width=\"{:.6f}\" height=\"{:.6f}\" fill=\"{}\" "
        "fill-opacity=\"0.5\"/>\n",
        cls, kLeft, top, plot_w, bottom - top, fill);
  };
  band("band-2sigma", bands.two_sigma, "#6baed6");
  band("band-1sigma", bands.one_sigma, "#fb6a4a");
  svg += fmt::format(
      "<line class=\"center-line\" x1=\"{:.6f}\" y1=\"{:.6f}\" x2=\"{:.6f}\" y2=\"{:.6f}\" "
      "stroke=\"black\" stroke-width=\"1\"/>\n",
      kLeft, y_of(bands.center), kLeft + plot_w, y_of(bands.center));

  // Axes and ticks.
  svg += fmt::format(
      "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\"/>\n"
      "<line x1=\"{0}\" y1=\"{2}\" x2=\"{3}\" y2=\"{2}\"/>\n</g>\n",
      kLeft, kTop, kTop + plot_h, kLeft + plot_w);
  svg += "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double f = y_lo + (y_hi - y_lo) * t / 4.0;
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.6g}</text>\n",
                       kLeft - 6, y_of(f) + 4, f);
  }
  const std::size_t step = m <= 16 ? 1 : m / 10;
  for (std::size_t i = 0; i < m; i += step) {
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                       x_of(static_cast<double>(i)), kTop + plot_h + 18,
                       sequence_label(i, report.base, report.k));
  }
  svg += "</g>\n";
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "font-size=\"13\">sequence</text>\n",
      kLeft + plot_w / 2, kHeight - 15);
  svg += fmt::format(
      "<text x=\"20\" y=\"{:.1f}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      "transform=\"rotate(-90 20 {:.1f})\">frequency</text>\n",
      kTop + plot_h / 2, kTop + plot_h / 2);

  const double radius = m <= 16 ? 4.0 : (m <= 256 ? 2.5 : 1.2);
  svg += "<g class=\"markers\" fill=\"black\">\n";
  for (std::size_t i = 0; i < m; ++i) {
    svg += fmt::format(
        "<circle class=\"marker\" cx=\"{:.6f}\" cy=\"{:.6f}\" r=\"{}\" data-index=\"{}\" "
        "data-freq=\"{:.17g}\"/>\n",
        x_of(static_cast<double>(i)), y_of(report.freqs[i]), radius, i, report.freqs[i]);
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

FrequencyDigest digest(const FrequencyReport& report) {
  const ExtremeZ extreme = max_abs_z(report);
  const auto [lo, hi] = std::minmax_element(report.zscores.begin(), report.zscores.end());
  return {report.k,   report.window_count, *lo, *hi, extreme.index, extreme.abs_z,
          extreme.exceeds_4_sigma};
}

nlohmann::json to_json(const VarianceRow& row) {
  return {{"base", row.base},
          {"k", row.k},
          {"window_count", row.window_count},
          {"expected_var", row.expected_var},
          {"expected_var_unc", row.expected_var_unc},
          {"observed_var", row.observed_var},
          {"deviation_sigma", row.deviation_sigma}};
}

nlohmann::json to_json(const FrequencyDigest& d) {
  return {{"k", d.k},
          {"window_count", d.window_count},
          {"min_z", d.min_z},
          {"max_z", d.max_z},
          {"max_abs_z_index", d.max_abs_z_index},
          {"max_abs_z", d.max_abs_z},
          {"exceeds_4_sigma", d.exceeds_4_sigma}};
}

nlohmann::json to_json(const RunSummary& s) {
  nlohmann::json digests = nlohmann::json::array();
  for (const auto& d : s.frequency_digests) digests.push_back(to_json(d));
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : s.variance_rows) rows.push_back(to_json(r));
  return {{"input", s.input},
          {"base", s.base},
          {"total_digits", s.total_digits},
          {"frequency_digests", digests},
          {"variance_rows", rows},
          {"tool_version", s.tool_version},
          {"timestamp", s.timestamp}};
}

}  // namespace pidigits
