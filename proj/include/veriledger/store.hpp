#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "veriledger/error.hpp"
#include "veriledger/ledger.hpp"
#include "veriledger/state.hpp"

namespace veriledger {

inline constexpr const char* kChainFormatVersion = "v1";
inline constexpr const char* kChainFileExtension = ".chain.jsonl";

/// Chain file: one compact JSON record per line,
///   {"v":"v1","height":H,"block":{...},"receipts":[...],"genesis":{...}|null}
/// Record 0 carries the genesis state it commits to; all later records carry null.
class ChainWriter {
 public:
  /// Creates or truncates `path`.
  explicit ChainWriter(const std::filesystem::path& path);

  /// Throws HeightGap unless the file is empty.
  void append_genesis(const Block& genesis, const NetworkState& genesis_state);
  /// Throws HeightGap unless block.height == last height + 1. The record is
  /// flushed and fsync'ed before returning.
  void append_block(const Block& block, const std::vector<Receipt>& receipts);

  std::optional<std::uint64_t> last_height() const { return last_height_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  void write_line(const std::string& line);

  struct Closer {
    void operator()(std::FILE* f) const { std::fclose(f); }
  };
  std::filesystem::path path_;
  std::unique_ptr<std::FILE, Closer> file_;
  std::optional<std::uint64_t> last_height_;
};

/// Failure tied to a position in a chain file.
class ChainError : public Error {
 public:
  ChainError(ErrorCode code, std::uint64_t height, std::size_t line, const std::string& detail);
  std::uint64_t height() const noexcept { return height_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::uint64_t height_;
  std::size_t line_;
};

struct ChainFile {
  std::optional<NetworkState> genesis_state;  // absent for an empty file
  std::vector<ChainRecord> records;
};

std::string encode_record(const ChainRecord& record, const NetworkState* genesis_state);

/// Strict parse. Throws ChainError(CorruptRecord) naming the 1-based line.
ChainFile read_chain(const std::filesystem::path& path);
ChainFile parse_chain(std::string_view contents);

/// Re-applies every block on top of `genesis_state` and checks that stored
/// hashes, state roots and receipts match the recomputation. Throws
/// ChainError naming the offending height.
NetworkState replay_chain(const ChainFile& file, const NetworkState& genesis_state);
NetworkState replay_chain(const std::filesystem::path& path, const NetworkState& genesis_state);
/// Replays against the genesis state embedded in record 0.
NetworkState replay_chain(const ChainFile& file);
NetworkState replay_chain(const std::filesystem::path& path);

/// Streaming replay: records are checked one line at a time, so verification
/// stops at the first bad record. Copyable; a copy resumes from the same point.
class ChainVerifier {
 public:
  /// One record without its newline. Throws ChainError.
  void feed(std::string_view line);
  /// Newline-terminated records. Throws ChainError(CorruptRecord) on an
  /// unterminated tail.
  void feed_contents(std::string_view contents);

  std::size_t lines() const { return lines_; }
  /// State after the last record fed; throws when nothing was fed.
  const NetworkState& state() const;

 private:
  std::optional<NetworkState> state_;
  std::size_t lines_ = 0;
};

struct VerifyResult {
  bool ok = false;
  std::uint64_t height = 0;  // tip height when ok
  Hash256 tip_hash;
  std::optional<std::uint64_t> failing_height;
  std::size_t failing_line = 0;
  std::string error;
};

VerifyResult verify_chain(const std::filesystem::path& path);
VerifyResult verify_chain_contents(std::string_view contents);

}  // namespace veriledger
