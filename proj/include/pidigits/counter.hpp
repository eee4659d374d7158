#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pidigits/digit_block.hpp"

namespace pidigits {

class DigitStream;

inline constexpr int kMaxSequenceLength = 8;
inline constexpr std::uint64_t kMaxTableEntries = 100'000'000;

/// Occurrence counts of every length-k sequence in base b. The sequence
/// "d1 d2 .. dk" lives at index d1*b^(k-1) + ... + dk.
struct CountTable {
  int base = 10;
  int k = 1;
  std::vector<std::uint64_t> counts;
  std::uint64_t window_count = 0;

  /// Zero table with b^k entries.
  static CountTable zeros(int base, int k);

  std::uint64_t total() const;
  friend bool operator==(const CountTable&, const CountTable&) = default;
};

/// b^k, checked against kMaxTableEntries.
std::uint64_t table_size(int base, int k);

/// The trailing digits a chunk hands to its successor.
struct CarryState {
  int k = 1;
  std::vector<Digit> tail;

  friend bool operator==(const CarryState&, const CarryState&) = default;
};

/// Tallies every length-k window of (carry.tail ++ block) that ends inside
/// `block`. Returns the partial table and the new carry.
std::pair<CountTable, CarryState> count_block(const DigitBlock& block, int k,
                                              const CarryState& carry);

/// Element-wise sum. Throws kShapeMismatch or kOverflow.
CountTable merge(const CountTable& a, const CountTable& b);
/// In-place variant of merge.
void merge_into(CountTable& into, const CountTable& from);

struct CountSet {
  int base = 10;
  std::vector<CountTable> tables;  // tables[k - 1]
  std::uint64_t total_digits = 0;

  int k_max() const noexcept { return static_cast<int>(tables.size()); }
  const CountTable& table(int k) const { return tables.at(static_cast<std::size_t>(k - 1)); }
  friend bool operator==(const CountSet&, const CountSet&) = default;
};

/// Incremental counter for k = 1..k_max. Blocks must be fed in stream order.
/// `consume_batch` counts its blocks on up to `workers` threads; each worker
/// gets the trailing k_max - 1 digits of the previous block as left context
/// and only tallies windows ending in its own block, so the result does not
/// depend on how the stream was split or scheduled.
class CountingEngine {
 public:
  CountingEngine(int base, int k_max);

  /// Rebuilds an engine from saved state. Validates shapes and totals.
  static CountingEngine restore(int base, std::uint64_t digits_consumed,
                                std::vector<CountTable> tables,
                                std::vector<CarryState> carries);

  void consume(const DigitBlock& block);
  void consume_batch(std::span<const DigitBlock> blocks, unsigned workers);

  int base() const noexcept { return base_; }
  int k_max() const noexcept { return k_max_; }
  std::uint64_t digits_consumed() const noexcept { return digits_consumed_; }
  const std::vector<CountTable>& tables() const noexcept { return tables_; }
  const std::vector<CarryState>& carries() const noexcept { return carries_; }

  CountSet result() const;

 private:
  int base_;
  int k_max_;
  std::uint64_t digits_consumed_ = 0;
  std::vector<CountTable> tables_;
  std::vector<CarryState> carries_;
};

/// Counts the whole stream. Bit-identical for every chunk_digits and workers.
/// Requires k_max >= 1 and chunk_digits >= k_max.
CountSet count_stream(DigitStream& stream, int k_max, std::size_t chunk_digits,
                      unsigned workers);

}  // namespace pidigits
