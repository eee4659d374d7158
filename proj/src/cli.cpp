#include "pidigits/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "pidigits/digitgen.hpp"
#include "pidigits/error.hpp"
#include "pidigits/pipeline.hpp"
#include "pidigits/report.hpp"
#include "pidigits/stats.hpp"
#include "pidigits/version.hpp"

namespace pidigits::cli {
namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
}

DigitBlock generate_bbp(std::uint64_t digits) {
  constexpr unsigned kRun = 8;
  DigitBlock block(16);
  for (std::uint64_t p = 0; p < digits; p += kRun) {
    const auto n = static_cast<unsigned>(std::min<std::uint64_t>(kRun, digits - p));
    try {
      block.append(bbp_hex_at(p, n).digits());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPrecision) throw;
      for (unsigned i = 0; i < n; ++i) block.append(bbp_hex_at(p + i, 1).digits());
    }
  }
  return block;
}

DigitFormat sniff_format(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::equal(magic, magic + 4, PackedHeader::kMagic.begin())
             ? DigitFormat::kPacked
             : DigitFormat::kAscii;
}

}  // namespace

int cmd_gen(const GenArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.base != 10 && args.base != 16) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("base must be 10 or 16, got {}", args.base));
    }
    DigitBlock block(args.base);
    if (args.algo == "chudnovsky") {
      block = args.base == 10 ? gen_pi_decimal(args.digits) : gen_pi_hex(args.digits);
    } else if (args.algo == "bbp") {
      if (args.base != 16) throw Error(ErrorCode::kInvalidArgument, "bbp only produces base 16");
      block = generate_bbp(args.digits);
    } else {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown algorithm '{}'", args.algo));
    }

    std::ofstream file(args.out, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::kIo, fmt::format("cannot create '{}'", args.out.string()));
    const std::span<const DigitBlock> blocks(&block, 1);
    if (args.format == DigitFormat::kPacked) {
      write_packed(args.base, blocks, file);
    } else {
      write_ascii(args.base, blocks, file);
    }
    file.close();
    if (!file) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", args.out.string()));

    DigestChain chain;
    chain.update(block.digits());
    fmt::print(out, "digits: {}\nsha256: {}\n", block.length(), chain.hex());
    return kExitOk;
  } catch (const Error& e) {
    fmt::print(err, "gen: {}: {}\n", to_string(e.code()), e.what());
    return kExitError;
  }
}

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.base != 10 && args.base != 16) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("base must be 10 or 16, got {}", args.base));
    }
    PipelineOptions options;
    options.k_max = args.kmax;
    options.chunk_digits = args.chunk_digits;
    options.workers = args.workers;
    options.checkpoint_path = args.checkpoint;
    options.checkpoint_every_digits = args.checkpoint_every_digits;

    Pipeline pipeline(InputDescriptor{args.input.string(), args.format, args.base}, options);
    if (pipeline.resumed()) {
      fmt::print(err, "resuming after {} digits\n", pipeline.digits_consumed());
    }
    if (!pipeline.run(args.stop_after_chunks)) {
      fmt::print(err, "stopped after {} digits; checkpoint written\n", pipeline.digits_consumed());
      return kExitInterrupted;
    }
    const CountSet counts = pipeline.result();
    fmt::print(err, "counted {} digits\n", counts.total_digits);

    std::filesystem::create_directories(args.out_dir);
    RunSummary summary;
    summary.input = args.input.string();
    summary.base = counts.base;
    summary.total_digits = counts.total_digits;
    summary.tool_version = kToolVersion;
    summary.timestamp = utc_timestamp();
    bool flagged = false;
    for (const auto& table : counts.tables) {
      if (table.window_count == 0) {
        throw Error(ErrorCode::kEmpty, fmt::format("input has no windows of length {}", table.k));
      }
      const FrequencyReport report = frequencies(table);
      const FrequencyDigest d = digest(report);
      flagged = flagged || d.exceeds_4_sigma;
      summary.frequency_digests.push_back(d);
      summary.variance_rows.push_back(variance_row(report));
      write_file(args.out_dir / fmt::format("freq_k{}.svg", table.k),
                 render_band_plot(report, sigma_bands(report)));
    }
    write_file(args.out_dir / "table.csv", emit_table(summary.variance_rows, TableFormat::kCsv));
    write_file(args.out_dir / "summary.json", to_json(summary).dump(2) + "\n");

    for (const auto& row : summary.variance_rows) {
      fmt::print(out, "base {} k {}: expected {} +- {}, observed {}, deviation {:+.2f} sigma\n",
                 row.base, row.k, format_sci(row.expected_var), format_sci(row.expected_var_unc),
                 format_sci(row.observed_var), row.deviation_sigma);
    }
    for (const auto& d : summary.frequency_digests) {
      fmt::print(out, "k {}: max |z| {:.3f} at index {}{}\n", d.k, d.max_abs_z, d.max_abs_z_index,
                 d.exceeds_4_sigma ? " (exceeds 4 sigma)" : "");
    }
    return flagged ? kExitFinding : kExitOk;
  } catch (const Error& e) {
    fmt::print(err, "analyze: {}: {}\n", to_string(e.code()), e.what());
    return kExitError;
  } catch (const std::filesystem::filesystem_error& e) {
    fmt::print(err, "analyze: {}\n", e.what());
    return kExitError;
  }
}

int cmd_spotcheck(const SpotcheckArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.count == 0) throw Error(ErrorCode::kInvalidArgument, "count must be positive");
    if (args.positions.empty()) throw Error(ErrorCode::kInvalidArgument, "no positions given");
    std::uint64_t needed = 0;
    for (auto p : args.positions) needed = std::max(needed, p + args.count);

    DigitStream stream = open_stream(args.input, sniff_format(args.input), 16);
    DigitBlock stored(16);
    while (stored.length() < needed) {
      const DigitBlock chunk = stream.read_chunk(static_cast<std::size_t>(
          std::min<std::uint64_t>(needed - stored.length(), 1 << 20)));
      if (chunk.empty()) break;
      stored.append(chunk.digits());
    }

    bool all_match = true;
    for (auto p : args.positions) {
      if (p + args.count > stored.length()) {
        throw Error(ErrorCode::kRange, fmt::format("position {} (+{}) is past the end of the input ({} digits)",
                                                   p, args.count, stored.length()));
      }
      DigitBlock expected(16);
      for (unsigned done = 0; done < args.count; done += kBbpMaxCount) {
        expected.append(bbp_hex_at(p + done, std::min(kBbpMaxCount, args.count - done)).digits());
      }
      const DigitBlock actual(16, {stored.digits().begin() + static_cast<std::ptrdiff_t>(p),
                                   stored.digits().begin() + static_cast<std::ptrdiff_t>(p + args.count)});
      const bool match = actual == expected;
      all_match = all_match && match;
      fmt::print(out, "position {}: stored {} bbp {} {}\n", p, actual.to_string(), expected.to_string(),
                 match ? "match" : "MISMATCH");
    }
    return all_match ? kExitOk : kExitFinding;
  } catch (const Error& e) {
    fmt::print(err, "spotcheck: {}: {}\n", to_string(e.code()), e.what());
    return kExitError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Digit statistics of pi: generate digits, count sequences, test normality"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  const std::map<std::string, DigitFormat> formats{{"ascii", DigitFormat::kAscii},
                                                   {"packed", DigitFormat::kPacked}};

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate fractional digits of pi");
  gen_cmd->add_option("--digits", gen.digits, "Number of digits")->required();
  gen_cmd->add_option("--base", gen.base, "10 or 16")->check(CLI::IsMember({10, 16}));
  gen_cmd->add_option("--algo", gen.algo, "chudnovsky or bbp")->check(CLI::IsMember({"chudnovsky", "bbp"}));
  gen_cmd->add_option("--format", gen.format, "ascii or packed")
      ->transform(CLI::CheckedTransformer(formats));
  gen_cmd->add_option("--out", gen.out, "Output file")->required();

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Count sequences and compute statistics");
  analyze_cmd->add_option("--input", analyze.input, "Digit file")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--format", analyze.format, "ascii or packed")
      ->transform(CLI::CheckedTransformer(formats));
  analyze_cmd->add_option("--base", analyze.base, "10 or 16")->check(CLI::IsMember({10, 16}));
  analyze_cmd->add_option("--kmax", analyze.kmax, "Longest sequence length")
      ->check(CLI::Range(1, kMaxSequenceLength));
  analyze_cmd->add_option("--chunk-digits", analyze.chunk_digits, "Digits per chunk")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--workers", analyze.workers, "Counting threads")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--checkpoint", analyze.checkpoint, "Checkpoint file (resumed if present)");
  analyze_cmd->add_option("--out-dir", analyze.out_dir, "Directory for reports");
  analyze_cmd->add_option("--checkpoint-every", analyze.checkpoint_every_digits,
                          "Digits between checkpoints")
      ->check(CLI::PositiveNumber)
      ->group("");
  analyze_cmd->add_option("--stop-after-chunks", analyze.stop_after_chunks,
                          "Stop after this many chunks, leaving a checkpoint")
      ->group("");

  SpotcheckArgs spot;
  auto* spot_cmd = app.add_subcommand("spotcheck", "Compare stored hex digits against BBP extraction");
  spot_cmd->add_option("--input", spot.input, "Hex digit file")->required()->check(CLI::ExistingFile);
  spot_cmd->add_option("--positions", spot.positions, "Comma-separated 0-based positions")
      ->required()
      ->delimiter(',');
  spot_cmd->add_option("--count", spot.count, "Digits per position")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  if (*gen_cmd) return cmd_gen(gen, out, err);
  if (*analyze_cmd) return cmd_analyze(analyze, out, err);
  return cmd_spotcheck(spot, out, err);
}

}  // namespace pidigits::cli
