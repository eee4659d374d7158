#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pidigits/counter.hpp"
#include "pidigits/digitio.hpp"

namespace pidigits {

/// SHA-256 chain over the canonical digit-value bytes (one byte per digit).
/// Digits are grouped into fixed segments of kSegmentDigits regardless of how
/// they were read: state_i = SHA256(state_{i-1} || segment_i), state_0 = 0^32.
/// The digest of a prefix additionally folds in the unfinished segment, so it
/// depends only on the digit sequence.
class DigestChain {
 public:
  static constexpr std::size_t kSegmentDigits = 1 << 20;

  void update(std::span<const Digit> digits);
  /// Hex digest of everything fed so far.
  std::string hex() const;

 private:
  std::array<std::uint8_t, 32> state_{};
  std::vector<std::uint8_t> pending_;
};

struct InputDescriptor {
  std::string path;
  DigitFormat format = DigitFormat::kAscii;
  int base = 10;

  friend bool operator==(const InputDescriptor&, const InputDescriptor&) = default;
};

/// Resumable counting state. Serialized as JSON; counts are decimal strings.
struct Checkpoint {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  InputDescriptor input;
  std::uint64_t resume_byte_offset = 0;
  std::uint64_t digits_consumed = 0;
  int k_max = 1;
  std::vector<CarryState> carries;
  std::vector<CountTable> counts;
  std::string digest;

  nlohmann::json to_json() const;
  /// Throws kCorruptCheckpoint on missing fields, bad shapes or counts that
  /// violate the totals invariant.
  static Checkpoint from_json(const nlohmann::json& doc);
};

/// Write-then-rename.
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

struct PipelineOptions {
  int k_max = 3;
  std::size_t chunk_digits = 1 << 20;
  unsigned workers = 1;
  std::optional<std::filesystem::path> checkpoint_path;
  std::uint64_t checkpoint_every_digits = 100'000'000;
  std::chrono::seconds checkpoint_interval{60};
};

/// Streams an input file through the counting engine, checkpointing as it
/// goes. If a checkpoint file exists at construction it is validated against
/// the input (descriptor, digest of the consumed prefix, byte offset) and
/// counting resumes from it; any mismatch throws.
class Pipeline {
 public:
  Pipeline(InputDescriptor input, PipelineOptions options);

  bool resumed() const noexcept { return resumed_; }
  bool finished() const noexcept { return finished_; }

  /// Counts until end of input, or until `max_chunks` more chunks have been
  /// consumed. Returns true once the whole input has been counted. A
  /// checkpoint is written whenever the cadence is due and when stopping
  /// early.
  bool run(std::optional<std::uint64_t> max_chunks = std::nullopt);

  Checkpoint checkpoint() const;
  CountSet result() const { return engine_.result(); }
  std::uint64_t digits_consumed() const noexcept { return engine_.digits_consumed(); }
  std::string digest() const { return chain_.hex(); }

 private:
  void resume_from(const Checkpoint& checkpoint);
  void write_checkpoint();

  InputDescriptor input_;
  PipelineOptions options_;
  DigitStream stream_;
  CountingEngine engine_;
  DigestChain chain_;
  bool resumed_ = false;
  bool finished_ = false;
};

}  // namespace pidigits
