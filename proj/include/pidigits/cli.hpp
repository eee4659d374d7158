#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pidigits/digitio.hpp"

namespace pidigits::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
/// analyze: some |z| > 4. spotcheck: a digit disagrees with BBP extraction.
inline constexpr int kExitFinding = 2;
/// analyze stopped early on request; the checkpoint is on disk.
inline constexpr int kExitInterrupted = 3;

struct GenArgs {
  std::uint64_t digits = 0;
  int base = 10;
  std::string algo = "chudnovsky";
  DigitFormat format = DigitFormat::kAscii;
  std::filesystem::path out;
};

struct AnalyzeArgs {
  std::filesystem::path input;
  DigitFormat format = DigitFormat::kAscii;
  int base = 10;
  int kmax = 3;
  std::size_t chunk_digits = 1 << 20;
  unsigned workers = 1;
  std::optional<std::filesystem::path> checkpoint;
  std::filesystem::path out_dir = ".";
  std::uint64_t checkpoint_every_digits = 100'000'000;
  std::optional<std::uint64_t> stop_after_chunks;
};

struct SpotcheckArgs {
  std::filesystem::path input;
  std::vector<std::uint64_t> positions;
  unsigned count = 1;
};

int cmd_gen(const GenArgs& args, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err);
int cmd_spotcheck(const SpotcheckArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to the subcommands above.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pidigits::cli
