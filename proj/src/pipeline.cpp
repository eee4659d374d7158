#include "pidigits/pipeline.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <system_error>

#include <fmt/format.h>

#include "pidigits/error.hpp"

namespace pidigits {
namespace {

using Sha256 = std::array<std::uint8_t, 32>;

Sha256 sha256(const Sha256& prefix, std::span<const std::uint8_t> data) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw Error(ErrorCode::kIo, "cannot allocate a digest context");
  Sha256 out{};
  unsigned int len = 0;
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, prefix.data(), prefix.size()) == 1 &&
                  EVP_DigestUpdate(ctx, data.data(), data.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, out.data(), &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok || len != out.size()) throw Error(ErrorCode::kIo, "SHA-256 failed");
  return out;
}

std::string to_hex(const Sha256& bytes) {
  std::string out;
  out.reserve(64);
  for (auto b : bytes) out += fmt::format("{:02x}", b);
  return out;
}

std::uint64_t parse_count(const std::string& text) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::kCorruptCheckpoint, fmt::format("'{}' is not a decimal count", text));
  }
  return value;
}

}  // namespace

void DigestChain::update(std::span<const Digit> digits) {
  while (!digits.empty()) {
    const std::size_t take = std::min(kSegmentDigits - pending_.size(), digits.size());
    pending_.insert(pending_.end(), digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(take));
    digits = digits.subspan(take);
    if (pending_.size() == kSegmentDigits) {
      state_ = sha256(state_, pending_);
      pending_.clear();
    }
  }
}

std::string DigestChain::hex() const {
  return to_hex(pending_.empty() ? state_ : sha256(state_, pending_));
}

nlohmann::json Checkpoint::to_json() const {
  nlohmann::json carry_doc = nlohmann::json::array();
  for (const auto& c : carries) {
    std::vector<int> tail(c.tail.begin(), c.tail.end());
    carry_doc.push_back({{"k", c.k}, {"tail", tail}});
  }
  nlohmann::json count_doc = nlohmann::json::array();
  for (const auto& t : counts) {
    std::vector<std::string> values;
    values.reserve(t.counts.size());
    for (auto v : t.counts) values.push_back(std::to_string(v));
    count_doc.push_back({{"k", t.k}, {"window_count", std::to_string(t.window_count)}, {"counts", values}});
  }
  return {{"format_version", format_version},
          {"input", {{"path", input.path}, {"format", to_string(input.format)}, {"base", input.base}}},
          {"resume_byte_offset", resume_byte_offset},
          {"digits_consumed", digits_consumed},
          {"k_max", k_max},
          {"carries", carry_doc},
          {"counts", count_doc},
          {"digest", digest}};
}

Checkpoint Checkpoint::from_json(const nlohmann::json& doc) {
  Checkpoint cp;
  try {
    cp.format_version = doc.at("format_version").get<int>();
    if (cp.format_version != kFormatVersion) {
      throw Error(ErrorCode::kCorruptCheckpoint,
                  fmt::format("unsupported checkpoint version {}", cp.format_version));
    }
    const auto& in = doc.at("input");
    cp.input.path = in.at("path").get<std::string>();
    cp.input.format = parse_digit_format(in.at("format").get<std::string>());
    cp.input.base = in.at("base").get<int>();
    cp.resume_byte_offset = doc.at("resume_byte_offset").get<std::uint64_t>();
    cp.digits_consumed = doc.at("digits_consumed").get<std::uint64_t>();
    cp.k_max = doc.at("k_max").get<int>();
    for (const auto& c : doc.at("carries")) {
      CarryState carry;
      carry.k = c.at("k").get<int>();
      for (int d : c.at("tail").get<std::vector<int>>()) {
        if (d < 0 || d > 15) throw Error(ErrorCode::kCorruptCheckpoint, "carry digit out of range");
        carry.tail.push_back(static_cast<Digit>(d));
      }
      cp.carries.push_back(std::move(carry));
    }
    for (const auto& t : doc.at("counts")) {
      CountTable table;
      table.base = cp.input.base;
      table.k = t.at("k").get<int>();
      table.window_count = parse_count(t.at("window_count").get<std::string>());
      for (const auto& v : t.at("counts")) table.counts.push_back(parse_count(v.get<std::string>()));
      cp.counts.push_back(std::move(table));
    }
    cp.digest = doc.at("digest").get<std::string>();
    if (cp.digest.size() != 64) throw Error(ErrorCode::kCorruptCheckpoint, "digest is not SHA-256 hex");
    if (static_cast<std::size_t>(cp.k_max) != cp.counts.size()) {
      throw Error(ErrorCode::kCorruptCheckpoint, "k_max does not match the stored tables");
    }
    // Shape and totals validation.
    CountingEngine::restore(cp.input.base, cp.digits_consumed, cp.counts, cp.carries);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptCheckpoint, fmt::format("checkpoint is malformed: {}", e.what()));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptCheckpoint) throw;
    throw Error(ErrorCode::kCorruptCheckpoint, fmt::format("checkpoint is invalid: {}", e.what()));
  }
  return cp;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << checkpoint.to_json().dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write checkpoint '{}'", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, fmt::format("cannot move checkpoint into place: {}", ec.message()));
  }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open checkpoint '{}'", path.string()));
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptCheckpoint, fmt::format("checkpoint is not JSON: {}", e.what()));
  }
  return Checkpoint::from_json(doc);
}

Pipeline::Pipeline(InputDescriptor input, PipelineOptions options)
    : input_(std::move(input)),
      options_(std::move(options)),
      stream_(open_stream(input_.path, input_.format, input_.base)),
      engine_(input_.base, options_.k_max) {
  if (options_.chunk_digits < static_cast<std::size_t>(options_.k_max)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("chunk size {} is smaller than k_max {}", options_.chunk_digits,
                            options_.k_max));
  }
  if (options_.workers == 0) throw Error(ErrorCode::kInvalidArgument, "workers must be positive");
  if (options_.checkpoint_path && std::filesystem::exists(*options_.checkpoint_path)) {
    resume_from(load_checkpoint(*options_.checkpoint_path));
  }
}

void Pipeline::resume_from(const Checkpoint& cp) {
  if (!(cp.input == input_)) {
    throw Error(ErrorCode::kDigestMismatch,
                fmt::format("checkpoint belongs to '{}' ({}, base {})", cp.input.path,
                            to_string(cp.input.format), cp.input.base));
  }
  if (cp.k_max != options_.k_max) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("checkpoint counted k up to {}, run asks for {}", cp.k_max, options_.k_max));
  }
  // Rehash the consumed prefix so a checkpoint cannot be applied to altered input.
  while (stream_.position() < cp.digits_consumed) {
    const auto want = std::min<std::uint64_t>(options_.chunk_digits, cp.digits_consumed - stream_.position());
    const DigitBlock block = stream_.read_chunk(static_cast<std::size_t>(want));
    if (block.empty()) {
      throw Error(ErrorCode::kDigestMismatch,
                  fmt::format("input ends after {} digits, checkpoint consumed {}",
                              stream_.position(), cp.digits_consumed));
    }
    chain_.update(block.digits());
  }
  if (chain_.hex() != cp.digest) {
    throw Error(ErrorCode::kDigestMismatch, "input prefix does not match the checkpoint digest");
  }
  if (stream_.byte_offset() != cp.resume_byte_offset) {
    throw Error(ErrorCode::kDigestMismatch,
                fmt::format("checkpoint resumes at byte {}, input is at byte {}",
                            cp.resume_byte_offset, stream_.byte_offset()));
  }
  engine_ = CountingEngine::restore(input_.base, cp.digits_consumed, cp.counts, cp.carries);
  resumed_ = true;
}

Checkpoint Pipeline::checkpoint() const {
  Checkpoint cp;
  cp.input = input_;
  cp.resume_byte_offset = stream_.byte_offset();
  cp.digits_consumed = engine_.digits_consumed();
  cp.k_max = engine_.k_max();
  cp.carries = engine_.carries();
  cp.counts = engine_.tables();
  cp.digest = chain_.hex();
  return cp;
}

void Pipeline::write_checkpoint() {
  if (options_.checkpoint_path) save_checkpoint(checkpoint(), *options_.checkpoint_path);
}

bool Pipeline::run(std::optional<std::uint64_t> max_chunks) {
  using Clock = std::chrono::steady_clock;
  auto last_write = Clock::now();
  std::uint64_t digits_at_last_write = engine_.digits_consumed();
  std::uint64_t chunks = 0;
  std::vector<DigitBlock> batch;

  while (!finished_) {
    if (max_chunks && chunks >= *max_chunks) {
      write_checkpoint();
      return false;
    }
    batch.clear();
    while (batch.size() < options_.workers && !(max_chunks && chunks >= *max_chunks)) {
      DigitBlock block = stream_.read_chunk(options_.chunk_digits);
      if (block.empty()) {
        finished_ = true;
        break;
      }
      chain_.update(block.digits());
      batch.push_back(std::move(block));
      ++chunks;
    }
    engine_.consume_batch(batch, options_.workers);

    const auto now = Clock::now();
    if (finished_ ||
        engine_.digits_consumed() - digits_at_last_write >= options_.checkpoint_every_digits ||
        now - last_write >= options_.checkpoint_interval) {
      write_checkpoint();
      last_write = now;
      digits_at_last_write = engine_.digits_consumed();
    }
  }
  return true;
}

}  // namespace pidigits
