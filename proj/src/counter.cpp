#include "pidigits/counter.hpp"

#include <algorithm>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "pidigits/digitio.hpp"
#include "pidigits/error.hpp"

namespace pidigits {
namespace {

void check_k(int k) {
  if (k < 1 || k > kMaxSequenceLength) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("sequence length must be in 1..{}, got {}", kMaxSequenceLength, k));
  }
}

std::uint64_t windows_for(std::uint64_t digits, int k) {
  const auto len = static_cast<std::uint64_t>(k);
  return digits >= len ? digits - len + 1 : 0;
}

// Last `n` digits of `digits`, or all of them if there are fewer.
std::vector<Digit> suffix(std::span<const Digit> digits, std::size_t n) {
  const std::size_t take = std::min(n, digits.size());
  return {digits.end() - static_cast<std::ptrdiff_t>(take), digits.end()};
}

// Tallies windows of (context ++ block) ending inside block into `table`.
void tally(std::span<const Digit> context, std::span<const Digit> block, CountTable& table) {
  const auto b = static_cast<std::uint64_t>(table.base);
  const auto k = static_cast<std::size_t>(table.k);
  const std::uint64_t size = table.counts.size();
  std::uint64_t index = 0;
  std::size_t seen = 0;
  for (Digit d : context) {
    index = (index * b + d) % size;
    ++seen;
  }
  auto* counts = table.counts.data();
  for (Digit d : block) {
    index = (index * b + d) % size;
    if (++seen >= k) {
      ++counts[index];
      ++table.window_count;
    }
  }
}

}  // namespace

std::uint64_t table_size(int base, int k) {
  check_base(base);
  check_k(k);
  std::uint64_t size = 1;
  for (int i = 0; i < k; ++i) size *= static_cast<std::uint64_t>(base);
  if (size > kMaxTableEntries) {
    throw Error(ErrorCode::kResourceLimit,
                fmt::format("base {} k={} needs {} table entries, limit is {}", base, k, size,
                            kMaxTableEntries));
  }
  return size;
}

CountTable CountTable::zeros(int base, int k) {
  CountTable table;
  table.base = base;
  table.k = k;
  table.counts.assign(table_size(base, k), 0);
  return table;
}

std::uint64_t CountTable::total() const {
  std::uint64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

std::pair<CountTable, CarryState> count_block(const DigitBlock& block, int k,
                                              const CarryState& carry) {
  check_k(k);
  if (carry.k != k) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("carry is for k={}, counting k={}", carry.k, k));
  }
  if (carry.tail.size() > static_cast<std::size_t>(k - 1)) {
    throw Error(ErrorCode::kInvalidArgument, "carry tail longer than k - 1");
  }
  for (Digit d : carry.tail) {
    if (d >= block.base()) {
      throw Error(ErrorCode::kBaseMismatch,
                  fmt::format("carry digit {} is not a base {} digit", static_cast<int>(d),
                              block.base()));
    }
  }

  CountTable table = CountTable::zeros(block.base(), k);
  tally(carry.tail, block.digits(), table);

  std::vector<Digit> joined = carry.tail;
  const auto keep = suffix(block.digits(), static_cast<std::size_t>(k - 1));
  joined.insert(joined.end(), keep.begin(), keep.end());
  return {std::move(table), CarryState{k, suffix(joined, static_cast<std::size_t>(k - 1))}};
}

void merge_into(CountTable& into, const CountTable& from) {
  if (into.base != from.base || into.k != from.k || into.counts.size() != from.counts.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                fmt::format("cannot merge base {} k={} with base {} k={}", into.base, into.k,
                            from.base, from.k));
  }
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (from.window_count > kMax - into.window_count) {
    throw Error(ErrorCode::kOverflow, "window count overflows 64 bits");
  }
  for (std::size_t i = 0; i < into.counts.size(); ++i) {
    if (from.counts[i] > kMax - into.counts[i]) {
      throw Error(ErrorCode::kOverflow, fmt::format("tally of sequence {} overflows 64 bits", i));
    }
  }
  for (std::size_t i = 0; i < into.counts.size(); ++i) into.counts[i] += from.counts[i];
  into.window_count += from.window_count;
}

CountTable merge(const CountTable& a, const CountTable& b) {
  CountTable out = a;
  merge_into(out, b);
  return out;
}

CountingEngine::CountingEngine(int base, int k_max) : base_(base), k_max_(k_max) {
  check_base(base);
  check_k(k_max);
  for (int k = 1; k <= k_max; ++k) {
    tables_.push_back(CountTable::zeros(base, k));
    carries_.push_back(CarryState{k, {}});
  }
}

CountingEngine CountingEngine::restore(int base, std::uint64_t digits_consumed,
                                       std::vector<CountTable> tables,
                                       std::vector<CarryState> carries) {
  if (tables.empty() || tables.size() != carries.size()) {
    throw Error(ErrorCode::kShapeMismatch, "need one table and one carry per sequence length");
  }
  CountingEngine engine(base, static_cast<int>(tables.size()));
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    const CountTable& t = tables[i];
    if (t.base != base || t.k != k || t.counts.size() != engine.tables_[i].counts.size()) {
      throw Error(ErrorCode::kShapeMismatch, fmt::format("table {} has the wrong shape", k));
    }
    if (t.window_count != windows_for(digits_consumed, k) || t.total() != t.window_count) {
      throw Error(ErrorCode::kShapeMismatch,
                  fmt::format("counts for k={} do not add up to {} digits", k, digits_consumed));
    }
    const CarryState& c = carries[i];
    const auto expected_tail = std::min<std::uint64_t>(static_cast<std::uint64_t>(k - 1), digits_consumed);
    if (c.k != k || c.tail.size() != expected_tail) {
      throw Error(ErrorCode::kShapeMismatch, fmt::format("carry for k={} is malformed", k));
    }
    if (std::any_of(c.tail.begin(), c.tail.end(), [base](Digit d) { return d >= base; })) {
      throw Error(ErrorCode::kShapeMismatch, fmt::format("carry for k={} has invalid digits", k));
    }
  }
  // Shorter tails must be suffixes of the longest one.
  const auto& longest = carries.back().tail;
  for (const auto& c : carries) {
    if (!std::equal(c.tail.rbegin(), c.tail.rend(), longest.rbegin())) {
      throw Error(ErrorCode::kShapeMismatch, "carry tails disagree with each other");
    }
  }
  engine.tables_ = std::move(tables);
  engine.carries_ = std::move(carries);
  engine.digits_consumed_ = digits_consumed;
  return engine;
}

void CountingEngine::consume(const DigitBlock& block) {
  consume_batch(std::span(&block, 1), 1);
}

void CountingEngine::consume_batch(std::span<const DigitBlock> blocks, unsigned workers) {
  if (workers == 0) throw Error(ErrorCode::kInvalidArgument, "workers must be positive");
  for (const auto& block : blocks) {
    if (block.base() != base_) {
      throw Error(ErrorCode::kBaseMismatch,
                  fmt::format("base {} block fed to a base {} counter", block.base(), base_));
    }
  }
  const auto context_len = static_cast<std::size_t>(k_max_ - 1);

  // Left context of every block: the k_max - 1 digits preceding it.
  std::vector<std::vector<Digit>> contexts;
  contexts.reserve(blocks.size());
  std::vector<Digit> running = carries_.back().tail;
  for (const auto& block : blocks) {
    contexts.push_back(running);
    const auto tail = suffix(block.digits(), context_len);
    running.insert(running.end(), tail.begin(), tail.end());
    running = suffix(running, context_len);
  }

  std::vector<std::vector<CountTable>> partials(blocks.size());
  auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < blocks.size(); i += workers) {
      auto& out = partials[i];
      for (int k = 1; k <= k_max_; ++k) {
        CountTable table = CountTable::zeros(base_, k);
        tally(suffix(contexts[i], static_cast<std::size_t>(k - 1)), blocks[i].digits(), table);
        out.push_back(std::move(table));
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(workers, blocks.size());
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  for (auto& partial : partials) {
    for (std::size_t i = 0; i < partial.size(); ++i) merge_into(tables_[i], partial[i]);
  }
  for (const auto& block : blocks) digits_consumed_ += block.length();
  carries_.clear();
  for (int k = 1; k <= k_max_; ++k) {
    carries_.push_back(CarryState{k, suffix(running, static_cast<std::size_t>(k - 1))});
  }
}

CountSet CountingEngine::result() const {
  return CountSet{base_, tables_, digits_consumed_};
}

CountSet count_stream(DigitStream& stream, int k_max, std::size_t chunk_digits, unsigned workers) {
  check_k(k_max);
  if (chunk_digits < static_cast<std::size_t>(k_max)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("chunk size {} is smaller than k_max {}", chunk_digits, k_max));
  }
  if (workers == 0) throw Error(ErrorCode::kInvalidArgument, "workers must be positive");
  CountingEngine engine(stream.base(), k_max);
  std::vector<DigitBlock> batch;
  for (bool done = false; !done;) {
    batch.clear();
    while (batch.size() < workers) {
      DigitBlock block = stream.read_chunk(chunk_digits);
      if (block.empty()) {
        done = true;
        break;
      }
      batch.push_back(std::move(block));
    }
    engine.consume_batch(batch, workers);
  }
  return engine.result();
}

}  // namespace pidigits
